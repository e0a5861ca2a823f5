#include "lsledger/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <unordered_set>

#include <fmt/format.h>

#include "lsledger/error.hpp"

namespace lsl {

DegreeReport degree_report(const InducedGraph& g) {
  DegreeReport r;
  const std::size_t n = g.node_count();
  r.nodes.assign(g.nodes().begin(), g.nodes().end());
  r.in_degree.resize(n);
  r.out_degree.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.in_degree[i] = g.in_neighbors(i).size();
    r.out_degree[i] = g.out_neighbors(i).size();
    ++r.in_histogram[r.in_degree[i]];
    ++r.out_histogram[r.out_degree[i]];
  }
  return r;
}

double degree_correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ParameterError("correlation series differ in length");
  if (xs.size() < 2) throw ParameterError("correlation needs at least two values");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelationError("zero variance series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

// Calls f(u, v, w) once per triangle with u < v < w (local indices).
template <typename F>
void for_each_triangle(const InducedGraph& g, F&& f) {
  const std::size_t n = g.node_count();
  for (std::uint32_t u = 0; u < n; ++u) {
    auto nu = g.neighbors(u);
    for (std::uint32_t v : nu) {
      if (v <= u) continue;
      auto nv = g.neighbors(v);
      // Sorted merge restricted to w > v.
      auto a = std::upper_bound(nu.begin(), nu.end(), v);
      auto b = std::upper_bound(nv.begin(), nv.end(), v);
      while (a != nu.end() && b != nv.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          f(u, v, *a);
          ++a;
          ++b;
        }
      }
    }
  }
}

}  // namespace

std::uint64_t triangle_count(const InducedGraph& g) {
  std::uint64_t count = 0;
  for_each_triangle(g, [&](auto, auto, auto) { ++count; });
  return count;
}

std::vector<std::uint64_t> triangles_per_node(const InducedGraph& g) {
  std::vector<std::uint64_t> per(g.node_count(), 0);
  for_each_triangle(g, [&](std::uint32_t u, std::uint32_t v, std::uint32_t w) {
    ++per[u];
    ++per[v];
    ++per[w];
  });
  return per;
}

ClusteringReport clustering(const InducedGraph& g) {
  ClusteringReport r;
  const std::size_t n = g.node_count();
  r.nodes.assign(g.nodes().begin(), g.nodes().end());
  r.coefficient.assign(n, 0.0);
  const auto triangles = triangles_per_node(g);
  double sum = 0.0, sum2 = 0.0;
  std::size_t n2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(g.neighbors(i).size());
    if (k >= 2) {
      r.coefficient[i] = 2.0 * static_cast<double>(triangles[i]) / (k * (k - 1.0));
      sum2 += r.coefficient[i];
      ++n2;
    }
    sum += r.coefficient[i];
    const auto bin = std::min<std::size_t>(static_cast<std::size_t>(r.coefficient[i] * 10.0), 9);
    ++r.histogram[bin];
  }
  if (n > 0) r.average = sum / static_cast<double>(n);
  if (n2 > 0) r.average_degree2 = sum2 / static_cast<double>(n2);
  return r;
}

std::vector<UndirectedEdge> undirected_edges(const InducedGraph& g) {
  std::vector<UndirectedEdge> edges;
  edges.reserve(g.undirected_edge_count());
  for (std::uint32_t u = 0; u < g.node_count(); ++u) {
    for (std::uint32_t v : g.neighbors(u)) {
      if (u < v) edges.emplace_back(u, v);
    }
  }
  return edges;
}

namespace {

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

std::vector<UndirectedEdge> rewire(std::vector<UndirectedEdge> edges, std::size_t swaps,
                                   std::mt19937_64& rng) {
  if (edges.size() < 2) return edges;
  std::unordered_set<std::uint64_t> present;
  present.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) present.insert(edge_key(a, b));

  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  std::bernoulli_distribution flip(0.5);
  for (std::size_t s = 0; s < swaps; ++s) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    const bool reversed = flip(rng);
    if (i == j) continue;
    const auto [a, b] = edges[i];
    auto [c, d] = edges[j];
    if (reversed) std::swap(c, d);
    // (a,b),(c,d) -> (a,d),(c,b)
    if (a == d || c == b) continue;
    const auto ad = edge_key(a, d);
    const auto cb = edge_key(c, b);
    if (present.contains(ad) || present.contains(cb)) continue;
    present.erase(edge_key(a, b));
    present.erase(edge_key(c, d));
    present.insert(ad);
    present.insert(cb);
    edges[i] = {std::min(a, d), std::max(a, d)};
    edges[j] = {std::min(c, b), std::max(c, b)};
  }
  return edges;
}

std::mt19937_64 sample_generator(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

NullModelResult null_model_triangles(const InducedGraph& g, std::size_t samples,
                                     std::uint64_t seed) {
  if (samples < 1) throw ParameterError("null model needs at least one sample");
  const auto edges = undirected_edges(g);
  if (edges.size() < 2) {
    throw DegenerateModelError(
        fmt::format("graph with {} undirected edge(s) admits no edge swap", edges.size()));
  }
  NullModelResult r;
  r.observed = triangle_count(g);
  r.sample_triangles.reserve(samples);
  const std::vector<NodeId> nodes(g.nodes().begin(), g.nodes().end());
  for (std::size_t s = 0; s < samples; ++s) {
    auto rng = sample_generator(seed, s);
    const auto rewired = rewire(edges, 10 * edges.size(), rng);
    std::vector<InducedGraph::Edge> mapped;
    mapped.reserve(rewired.size());
    for (const auto& [a, b] : rewired) mapped.emplace_back(nodes[a], nodes[b]);
    r.sample_triangles.push_back(triangle_count(InducedGraph::undirected(nodes, mapped)));
  }
  double sum = 0.0;
  for (auto t : r.sample_triangles) sum += static_cast<double>(t);
  r.mean = sum / static_cast<double>(samples);
  if (samples > 1) {
    double sq = 0.0;
    for (auto t : r.sample_triangles) sq += (static_cast<double>(t) - r.mean) * (static_cast<double>(t) - r.mean);
    r.stddev = std::sqrt(sq / static_cast<double>(samples - 1));
  }
  if (r.mean > 0.0) r.ratio = static_cast<double>(r.observed) / r.mean;
  return r;
}

namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

void bfs(const InducedGraph& g, std::size_t source, std::vector<std::uint32_t>& dist) {
  std::fill(dist.begin(), dist.end(), kUnreached);
  std::deque<std::uint32_t> queue;
  dist[source] = 0;
  queue.push_back(static_cast<std::uint32_t>(source));
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (auto v : g.neighbors(u)) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
}

std::size_t require_local(const InducedGraph& g, NodeId v) {
  auto local = g.local_index(v);
  if (!local) throw LookupError(fmt::format("node #{} not in graph", v.value));
  return *local;
}

}  // namespace

std::optional<std::uint32_t> pair_distance(const InducedGraph& g, NodeId u, NodeId v) {
  const auto lu = require_local(g, u);
  const auto lv = require_local(g, v);
  if (lu == lv) return 0;
  std::vector<std::uint32_t> dist(g.node_count());
  bfs(g, lu, dist);
  if (dist[lv] == kUnreached) return std::nullopt;
  return dist[lv];
}

std::size_t DistanceHistogram::total() const {
  std::size_t t = unreachable;
  for (const auto& [d, c] : finite) t += c;
  return t;
}

DistanceHistogram distance_distribution(std::span<const std::pair<NodeId, NodeId>> pairs,
                                        const InducedGraph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> local;
  local.reserve(pairs.size());
  for (const auto& [u, v] : pairs) local.emplace_back(require_local(g, u), require_local(g, v));
  std::sort(local.begin(), local.end());

  DistanceHistogram h;
  std::vector<std::uint32_t> dist(g.node_count());
  std::size_t current = std::numeric_limits<std::size_t>::max();
  for (const auto& [u, v] : local) {
    if (u != current) {
      bfs(g, u, dist);
      current = u;
    }
    if (dist[v] == kUnreached) {
      ++h.unreachable;
    } else {
      ++h.finite[dist[v]];
    }
  }
  return h;
}

}  // namespace lsl
