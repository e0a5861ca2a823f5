#include "lsledger/stream.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "lsledger/error.hpp"

namespace lsl {

NodeId KeyTable::intern(std::string_view key) {
  auto it = index_.find(std::string(key));
  if (it != index_.end()) return NodeId{it->second};
  const auto id = static_cast<std::uint32_t>(keys_.size());
  keys_.emplace_back(key);
  index_.emplace(keys_.back(), id);
  return NodeId{id};
}

std::optional<NodeId> KeyTable::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return NodeId{it->second};
}

const std::string& KeyTable::key(NodeId id) const {
  if (!contains(id)) throw LookupError(fmt::format("unknown node handle #{}", id.value));
  return keys_[id.value];
}

bool LinkStream::has_node(NodeId v) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), v);
}

std::string LinkStream::key(NodeId v) const {
  if (keys_ && keys_->contains(v)) return keys_->key(v);
  return fmt::format("#{}", v.value);
}

std::span<const Link> LinkStream::find(TimeInstant t, NodeId source, NodeId target) const {
  const Link probe{t, source, target, std::nullopt};
  auto [lo, hi] = std::equal_range(links_.begin(), links_.end(), probe, link_order);
  return {lo, hi};
}

namespace {

std::vector<NodeId> sorted_unique(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string describe(const Link& l) {
  return fmt::format("({}, #{}, #{})", l.t, l.source.value, l.target.value);
}

}  // namespace

LinkStream build_stream(std::vector<Link> links, StreamOptions options) {
  if (links.empty() && !options.interval) {
    throw ParameterError("empty link list requires an explicit interval");
  }
  if (options.interval && options.interval->begin > options.interval->end) {
    throw ParameterError("interval begin after end");
  }
  if (options.interval && options.interval->begin < 0) {
    throw ParameterError("interval must be non-negative");
  }

  std::vector<NodeId> nodes;
  const bool explicit_nodes = options.nodes.has_value();
  if (explicit_nodes) nodes = sorted_unique(std::move(*options.nodes));

  const bool weighted = !links.empty() && links.front().amount.has_value();
  for (std::size_t i = 0; i < links.size(); ++i) {
    const Link& l = links[i];
    if (l.source == l.target) {
      throw InvalidLinkError(i, fmt::format("link {} at index {} is a self-link", describe(l), i));
    }
    if (l.t < 0) {
      throw InvalidLinkError(i, fmt::format("link {} at index {} has a negative time", describe(l), i));
    }
    if (options.interval && !options.interval->contains(l.t)) {
      throw InvalidLinkError(
          i, fmt::format("link {} at index {} lies outside [{}, {}]", describe(l), i,
                         options.interval->begin, options.interval->end));
    }
    if (l.amount.has_value() != weighted) {
      throw InvalidLinkError(i, fmt::format("link {} at index {} mixes weighted and unweighted links",
                                            describe(l), i));
    }
    if (l.amount && *l.amount < 0) {
      throw InvalidLinkError(i, fmt::format("link {} at index {} has a negative amount", describe(l), i));
    }
    if (explicit_nodes && (!std::binary_search(nodes.begin(), nodes.end(), l.source) ||
                           !std::binary_search(nodes.begin(), nodes.end(), l.target))) {
      throw InvalidLinkError(i, fmt::format("link {} at index {} has an endpoint outside the node set",
                                            describe(l), i));
    }
  }

  // Stable so that duplicate (t, u, v) links keep their relative input order.
  std::stable_sort(links.begin(), links.end(), link_order);

  if (!explicit_nodes) {
    nodes.reserve(links.size() * 2);
    for (const Link& l : links) {
      nodes.push_back(l.source);
      nodes.push_back(l.target);
    }
    nodes = sorted_unique(std::move(nodes));
  }

  Interval interval = options.interval.value_or(Interval{});
  if (!options.interval) interval = {links.front().t, links.back().t};

  return StreamBuilder::assemble(interval, std::move(nodes), std::move(links), weighted,
                                 std::move(options.keys));
}

LinkStream StreamBuilder::derive(const LinkStream& parent, std::vector<NodeId> nodes,
                                 std::vector<Link> links) {
  return assemble(parent.interval_, std::move(nodes), std::move(links), parent.weighted_,
                  parent.keys_);
}

LinkStream StreamBuilder::assemble(Interval interval, std::vector<NodeId> nodes,
                                   std::vector<Link> links, bool weighted,
                                   std::shared_ptr<const KeyTable> keys) {
  LinkStream s;
  s.interval_ = interval;
  s.nodes_ = std::move(nodes);
  s.links_ = std::move(links);
  s.weighted_ = weighted;
  s.keys_ = std::move(keys);
  return s;
}

const char* to_string(NodeClass c) {
  return c == NodeClass::Member ? "M" : "A";
}

NodeClassification::NodeClassification(std::vector<NodeId> members,
                                       std::vector<NodeId> anonymous,
                                       std::shared_ptr<const KeyTable> keys)
    : members_(sorted_unique(std::move(members))),
      anonymous_(sorted_unique(std::move(anonymous))),
      keys_(std::move(keys)) {
  std::uint32_t bound = 0;
  for (NodeId v : members_) bound = std::max(bound, v.value + 1);
  for (NodeId v : anonymous_) bound = std::max(bound, v.value + 1);
  lookup_.assign(bound, 0);
  for (NodeId v : members_) lookup_[v.value] = 1;
  for (NodeId v : anonymous_) {
    if (lookup_[v.value] == 1) {
      throw ClassificationError(fmt::format("node #{} classified as both member and anonymous",
                                            v.value));
    }
    lookup_[v.value] = 2;
  }
}

std::optional<NodeClass> NodeClassification::class_of(NodeId v) const {
  if (v.value >= lookup_.size() || lookup_[v.value] == 0) return std::nullopt;
  return lookup_[v.value] == 1 ? NodeClass::Member : NodeClass::Anonymous;
}

LinkStream substream_by_class(const LinkStream& s, const NodeClassification& cls,
                              NodeClass src_class, NodeClass dst_class) {
  std::vector<NodeId> nodes;
  for (NodeId v : s.nodes()) {
    auto c = cls.class_of(v);
    if (!c) throw ClassificationError(fmt::format("unclassified node '{}'", s.key(v)));
    if (*c == src_class || *c == dst_class) nodes.push_back(v);
  }
  std::vector<Link> links;
  for (const Link& l : s.links()) {
    if (cls.class_of(l.source) == src_class && cls.class_of(l.target) == dst_class) {
      links.push_back(l);
    }
  }
  return StreamBuilder::derive(s, std::move(nodes), std::move(links));
}

std::size_t activity(const LinkStream& s, TimeInstant t) {
  if (!s.interval().contains(t)) {
    throw OutOfRangeError(fmt::format("time {} outside [{}, {}]", t, s.interval().begin,
                                      s.interval().end));
  }
  auto links = s.links();
  auto lo = std::lower_bound(links.begin(), links.end(), t,
                             [](const Link& l, TimeInstant x) { return l.t < x; });
  std::size_t count = 0;
  for (auto it = lo; it != links.end() && it->t == t; ++it) {
    // Sorted by (t, source, target): duplicates are adjacent.
    if (it == lo || it[-1].source != it->source || it[-1].target != it->target) ++count;
  }
  return count;
}

std::int64_t TimeSeries::total() const {
  std::int64_t sum = 0;
  for (auto v : values) sum += v;
  return sum;
}

TimeSeries activity_series(const LinkStream& s, Duration bin_width) {
  if (bin_width <= 0) throw ParameterError("bin width must be positive");
  const Interval& iv = s.interval();
  TimeSeries series;
  series.start = iv.begin;
  series.bin_width = bin_width;
  series.values.assign(static_cast<std::size_t>((iv.end - iv.begin) / bin_width) + 1, 0);
  for (const Link& l : s.links()) {
    ++series.values[static_cast<std::size_t>((l.t - iv.begin) / bin_width)];
  }
  return series;
}

TimeSeries rolling_sum(const TimeSeries& series, Duration window) {
  if (window < series.bin_width) throw ParameterError("window smaller than bin width");
  // Number of bins whose start lies in (b - window, b].
  const auto span = static_cast<std::size_t>((window + series.bin_width - 1) / series.bin_width);
  TimeSeries out{series.start, series.bin_width, std::vector<std::int64_t>(series.values.size(), 0)};
  std::int64_t running = 0;
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    running += series.values[i];
    if (i >= span) running -= series.values[i - span];
    out.values[i] = running;
  }
  return out;
}

InducedGraph::InducedGraph(std::vector<NodeId> nodes, std::vector<Edge> directed_edges)
    : nodes_(sorted_unique(std::move(nodes))), edges_(std::move(directed_edges)) {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  std::vector<std::pair<std::uint32_t, std::uint32_t>> out_arcs, in_arcs, und_arcs;
  out_arcs.reserve(edges_.size());
  in_arcs.reserve(edges_.size());
  und_arcs.reserve(edges_.size() * 2);
  for (const auto& [u, v] : edges_) {
    if (u == v) throw InvalidLinkError(0, fmt::format("self-loop on node #{}", u.value));
    auto lu = local_index(u);
    auto lv = local_index(v);
    if (!lu || !lv) throw LookupError("edge endpoint outside the graph node set");
    const auto a = static_cast<std::uint32_t>(*lu);
    const auto b = static_cast<std::uint32_t>(*lv);
    out_arcs.emplace_back(a, b);
    in_arcs.emplace_back(b, a);
    und_arcs.emplace_back(a, b);
    und_arcs.emplace_back(b, a);
  }
  std::sort(und_arcs.begin(), und_arcs.end());
  und_arcs.erase(std::unique(und_arcs.begin(), und_arcs.end()), und_arcs.end());
  std::sort(in_arcs.begin(), in_arcs.end());

  build_csr(nodes_.size(), out_arcs, out_offsets_, out_targets_);
  build_csr(nodes_.size(), in_arcs, in_offsets_, in_targets_);
  build_csr(nodes_.size(), und_arcs, und_offsets_, und_targets_);
}

InducedGraph InducedGraph::undirected(std::vector<NodeId> nodes, const std::vector<Edge>& edges) {
  std::vector<Edge> both;
  both.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    both.emplace_back(u, v);
    both.emplace_back(v, u);
  }
  return InducedGraph(std::move(nodes), std::move(both));
}

void InducedGraph::build_csr(std::size_t n,
                             const std::vector<std::pair<std::uint32_t, std::uint32_t>>& arcs,
                             std::vector<std::uint32_t>& offsets,
                             std::vector<std::uint32_t>& targets) {
  // arcs must be sorted by (source, target).
  offsets.assign(n + 1, 0);
  targets.resize(arcs.size());
  for (const auto& arc : arcs) ++offsets[arc.first + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  for (std::size_t i = 0; i < arcs.size(); ++i) targets[i] = arcs[i].second;
}

std::optional<std::size_t> InducedGraph::local_index(NodeId v) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), v);
  if (it == nodes_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::span<const std::uint32_t> InducedGraph::out_neighbors(std::size_t local) const {
  return {out_targets_.data() + out_offsets_[local], out_targets_.data() + out_offsets_[local + 1]};
}

std::span<const std::uint32_t> InducedGraph::in_neighbors(std::size_t local) const {
  return {in_targets_.data() + in_offsets_[local], in_targets_.data() + in_offsets_[local + 1]};
}

std::span<const std::uint32_t> InducedGraph::neighbors(std::size_t local) const {
  return {und_targets_.data() + und_offsets_[local], und_targets_.data() + und_offsets_[local + 1]};
}

InducedGraph induced_graph(const LinkStream& s) {
  std::vector<InducedGraph::Edge> edges;
  edges.reserve(s.links().size());
  for (const Link& l : s.links()) edges.emplace_back(l.source, l.target);
  return InducedGraph(std::vector<NodeId>(s.nodes().begin(), s.nodes().end()), std::move(edges));
}

}  // namespace lsl
