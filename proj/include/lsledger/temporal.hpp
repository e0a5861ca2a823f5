#pragma once

// Temporal neighborhoods, cross-stream neighborhood overlap and the directed
// k-closure of links (k = 2, 3).

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lsledger/stream.hpp"

namespace lsl {

using TemporalNode = std::pair<TimeInstant, NodeId>;

struct NeighborhoodCluster {
  NodeId owner;
  // Sorted, unique.
  std::vector<TemporalNode> elements;
};

// Throws LookupError when v is not a node of s.
NeighborhoodCluster neighborhood(const LinkStream& s, NodeId v);
// Sorted, unique.
std::vector<NodeId> aggregated_neighborhood(const LinkStream& s, NodeId v);

struct NeighborhoodOverlap {
  // |N2 ∩ N1| / |N2|; nullopt (undefined) when N2 is empty.
  std::optional<double> inclusion;
  // |N1 ∩ N2| / |N1 ∪ N2|; nullopt when both are empty.
  std::optional<double> jaccard;
};

// Inclusion of v's aggregated neighborhood in s2 within the one in s1. A
// stream that does not contain v contributes an empty neighborhood; throws
// LookupError when neither does.
NeighborhoodOverlap neighborhood_overlap(NodeId v, const LinkStream& s1, const LinkStream& s2);
NeighborhoodOverlap set_overlap(const std::vector<NodeId>& first,
                                const std::vector<NodeId>& second);

struct LinkKey {
  TimeInstant t = 0;
  NodeId source;
  NodeId target;
  friend bool operator==(const LinkKey&, const LinkKey&) = default;
};

struct ClosureResult {
  LinkKey link;
  int k = 2;
  // nullopt = infinite (no closing pattern).
  std::optional<Duration> lookback;
};

// Per-pair timestamp index of a stream; answers "latest (a -> b) link at or
// before t" in logarithmic time.
class ClosureIndex {
 public:
  explicit ClosureIndex(const LinkStream& s);

  std::optional<TimeInstant> latest(NodeId a, NodeId b, TimeInstant t) const;

  // 2-closure: t - t' for the latest (t', v, u) with t' <= t.
  std::optional<Duration> two_closure(const LinkKey& link) const;
  // 3-closure: walking the directed cycle u -> v -> w -> u from the query
  // link, each next link is no later than the previous one
  // (t2 <= t1 <= t); the lookback t - t2 is minimised over w and link choices.
  std::optional<Duration> three_closure(const LinkKey& link) const;

 private:
  static std::uint64_t pair_key(NodeId a, NodeId b) {
    return (static_cast<std::uint64_t>(a.value) << 32) | b.value;
  }

  std::unordered_map<std::uint64_t, std::vector<TimeInstant>> times_;
  std::unordered_map<std::uint32_t, std::vector<NodeId>> out_;
};

// Both throw LookupError when the link is not in s.
ClosureResult two_closure(const LinkStream& s, const LinkKey& link);
ClosureResult three_closure(const LinkStream& s, const LinkKey& link);

struct ClosureDistribution {
  int k = 2;
  // One per link, in stream order.
  std::vector<ClosureResult> results;
  // finite lookback -> number of links
  std::map<Duration, std::size_t> histogram;
  std::size_t infinite = 0;
};

// Throws ParameterError when k is not 2 or 3.
ClosureDistribution closure_distribution(const LinkStream& s, int k);

}  // namespace lsl
