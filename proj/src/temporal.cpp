#include "lsledger/temporal.hpp"

#include <algorithm>
#include <iterator>

#include <fmt/format.h>

#include "lsledger/error.hpp"

namespace lsl {

namespace {

void require_node(const LinkStream& s, NodeId v) {
  if (!s.has_node(v)) throw LookupError(fmt::format("node '{}' not in stream", s.key(v)));
}

void require_link(const LinkStream& s, const LinkKey& link) {
  if (s.find(link.t, link.source, link.target).empty()) {
    throw LookupError(fmt::format("link ({}, {}, {}) not in stream", link.t, s.key(link.source),
                                  s.key(link.target)));
  }
}

}  // namespace

NeighborhoodCluster neighborhood(const LinkStream& s, NodeId v) {
  require_node(s, v);
  NeighborhoodCluster cluster{v, {}};
  for (const Link& l : s.links()) {
    if (l.source == v) cluster.elements.emplace_back(l.t, l.target);
    if (l.target == v) cluster.elements.emplace_back(l.t, l.source);
  }
  std::sort(cluster.elements.begin(), cluster.elements.end());
  cluster.elements.erase(std::unique(cluster.elements.begin(), cluster.elements.end()),
                         cluster.elements.end());
  return cluster;
}

std::vector<NodeId> aggregated_neighborhood(const LinkStream& s, NodeId v) {
  const auto cluster = neighborhood(s, v);
  std::vector<NodeId> out;
  out.reserve(cluster.elements.size());
  for (const auto& [t, u] : cluster.elements) out.push_back(u);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NeighborhoodOverlap set_overlap(const std::vector<NodeId>& first,
                                const std::vector<NodeId>& second) {
  std::vector<NodeId> common;
  std::set_intersection(first.begin(), first.end(), second.begin(), second.end(),
                        std::back_inserter(common));
  const std::size_t uni = first.size() + second.size() - common.size();
  NeighborhoodOverlap o;
  if (!second.empty()) {
    o.inclusion = static_cast<double>(common.size()) / static_cast<double>(second.size());
  }
  if (uni > 0) o.jaccard = static_cast<double>(common.size()) / static_cast<double>(uni);
  return o;
}

NeighborhoodOverlap neighborhood_overlap(NodeId v, const LinkStream& s1, const LinkStream& s2) {
  const bool in1 = s1.has_node(v);
  const bool in2 = s2.has_node(v);
  if (!in1 && !in2) throw LookupError(fmt::format("node #{} in neither stream", v.value));
  const auto n1 = in1 ? aggregated_neighborhood(s1, v) : std::vector<NodeId>{};
  const auto n2 = in2 ? aggregated_neighborhood(s2, v) : std::vector<NodeId>{};
  return set_overlap(n1, n2);
}

ClosureIndex::ClosureIndex(const LinkStream& s) {
  // Links are time-sorted, so every per-pair vector is sorted too.
  for (const Link& l : s.links()) {
    auto& times = times_[pair_key(l.source, l.target)];
    if (times.empty()) out_[l.source.value].push_back(l.target);
    times.push_back(l.t);
  }
}

std::optional<TimeInstant> ClosureIndex::latest(NodeId a, NodeId b, TimeInstant t) const {
  auto it = times_.find(pair_key(a, b));
  if (it == times_.end()) return std::nullopt;
  const auto& times = it->second;
  auto pos = std::upper_bound(times.begin(), times.end(), t);
  if (pos == times.begin()) return std::nullopt;
  return *std::prev(pos);
}

std::optional<Duration> ClosureIndex::two_closure(const LinkKey& link) const {
  auto back = latest(link.target, link.source, link.t);
  if (!back) return std::nullopt;
  return link.t - *back;
}

std::optional<Duration> ClosureIndex::three_closure(const LinkKey& link) const {
  const NodeId u = link.source;
  const NodeId v = link.target;
  auto out = out_.find(v.value);
  if (out == out_.end()) return std::nullopt;
  std::optional<TimeInstant> best;
  for (NodeId w : out->second) {
    if (w == u) continue;
    // The latest v -> w leaves the widest room for w -> u.
    auto t1 = latest(v, w, link.t);
    if (!t1) continue;
    auto t2 = latest(w, u, *t1);
    if (t2 && (!best || *t2 > *best)) best = t2;
  }
  if (!best) return std::nullopt;
  return link.t - *best;
}

ClosureResult two_closure(const LinkStream& s, const LinkKey& link) {
  require_link(s, link);
  return {link, 2, ClosureIndex(s).two_closure(link)};
}

ClosureResult three_closure(const LinkStream& s, const LinkKey& link) {
  require_link(s, link);
  return {link, 3, ClosureIndex(s).three_closure(link)};
}

ClosureDistribution closure_distribution(const LinkStream& s, int k) {
  if (k != 2 && k != 3) throw ParameterError(fmt::format("k-closure defined for k in {{2,3}}, got {}", k));
  const ClosureIndex index(s);
  ClosureDistribution d;
  d.k = k;
  d.results.reserve(s.links().size());
  for (const Link& l : s.links()) {
    const LinkKey key{l.t, l.source, l.target};
    auto lookback = k == 2 ? index.two_closure(key) : index.three_closure(key);
    if (lookback) {
      ++d.histogram[*lookback];
    } else {
      ++d.infinite;
    }
    d.results.push_back({key, k, lookback});
  }
  return d;
}

}  // namespace lsl
