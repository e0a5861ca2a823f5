#pragma once

// Static analyses on induced graphs: degrees, correlation, clustering,
// triangles, degree-preserving null models and BFS distances.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "lsledger/stream.hpp"

namespace lsl {

struct DegreeReport {
  std::vector<NodeId> nodes;
  std::vector<std::size_t> in_degree;
  std::vector<std::size_t> out_degree;
  // degree -> number of nodes
  std::map<std::size_t, std::size_t> in_histogram;
  std::map<std::size_t, std::size_t> out_histogram;
};

DegreeReport degree_report(const InducedGraph& g);

// Pearson product-moment coefficient. Throws ParameterError on size mismatch
// or fewer than two values, UndefinedCorrelationError on zero variance.
double degree_correlation(std::span<const double> xs, std::span<const double> ys);

struct ClusteringReport {
  std::vector<NodeId> nodes;
  std::vector<double> coefficient;
  // Mean over every node, degree < 2 counted as 0.
  double average = 0.0;
  // Mean over nodes with undirected degree >= 2; nullopt when there are none.
  std::optional<double> average_degree2;
  // Ten equal-width bins over [0, 1], last bin closed.
  std::array<std::size_t, 10> histogram{};
};

ClusteringReport clustering(const InducedGraph& g);

// Undirected triangles.
std::uint64_t triangle_count(const InducedGraph& g);
// Triangles through each node (local index order).
std::vector<std::uint64_t> triangles_per_node(const InducedGraph& g);

using UndirectedEdge = std::pair<std::uint32_t, std::uint32_t>;

// Deduplicated undirected edges (local indices, first < second).
std::vector<UndirectedEdge> undirected_edges(const InducedGraph& g);

// One double-edge-swap randomization of the undirected view: `swaps` swap
// attempts, rejecting those that would create self-loops or multi-edges.
std::vector<UndirectedEdge> rewire(std::vector<UndirectedEdge> edges, std::size_t swaps,
                                   std::mt19937_64& rng);

// Generator for null-model sample `index`, independent of every other sample.
std::mt19937_64 sample_generator(std::uint64_t seed, std::uint64_t index);

struct NullModelResult {
  std::uint64_t observed = 0;
  std::vector<std::uint64_t> sample_triangles;
  double mean = 0.0;
  // Sample standard deviation (n - 1); 0 for a single sample.
  double stddev = 0.0;
  // observed / mean; nullopt when mean is 0.
  std::optional<double> ratio;
};

// Throws ParameterError for samples < 1, DegenerateModelError when the
// undirected view has fewer than two edges.
NullModelResult null_model_triangles(const InducedGraph& g, std::size_t samples,
                                     std::uint64_t seed);

// BFS hop count on the undirected view; nullopt when unreachable. Throws
// LookupError when either node is absent.
std::optional<std::uint32_t> pair_distance(const InducedGraph& g, NodeId u, NodeId v);

struct DistanceHistogram {
  std::map<std::uint32_t, std::size_t> finite;
  std::size_t unreachable = 0;
  std::size_t total() const;
};

// One histogram entry per element of `pairs` (repeated pairs count again).
DistanceHistogram distance_distribution(std::span<const std::pair<NodeId, NodeId>> pairs,
                                        const InducedGraph& g);

}  // namespace lsl
