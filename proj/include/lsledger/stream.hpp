#pragma once

// Link-stream data model: timestamped directed links over a node set,
// substreams by node class, induced graph and activity.

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lsl {

// Seconds since the Unix epoch.
using TimeInstant = std::int64_t;
using Duration = std::int64_t;
// Currency amounts in centimes.
using Amount = std::int64_t;

struct NodeId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

// Bijection between dense node handles and the original public keys.
class KeyTable {
 public:
  // Returns the existing handle when the key is already known.
  NodeId intern(std::string_view key);
  std::optional<NodeId> find(std::string_view key) const;
  const std::string& key(NodeId id) const;
  std::size_t size() const noexcept { return keys_.size(); }
  bool contains(NodeId id) const noexcept { return id.value < keys_.size(); }

 private:
  std::vector<std::string> keys_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct Link {
  TimeInstant t = 0;
  NodeId source;
  NodeId target;
  std::optional<Amount> amount;

  friend bool operator==(const Link&, const Link&) = default;
};

// (t, source, target) lexicographic order used for every stored stream.
inline bool link_order(const Link& a, const Link& b) {
  if (a.t != b.t) return a.t < b.t;
  if (a.source != b.source) return a.source < b.source;
  return a.target < b.target;
}

struct Interval {
  TimeInstant begin = 0;
  TimeInstant end = 0;

  bool contains(TimeInstant t) const noexcept { return begin <= t && t <= end; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Immutable directed link stream L = (T, V, E).
class LinkStream {
 public:
  LinkStream() = default;

  const Interval& interval() const noexcept { return interval_; }
  // Sorted, unique.
  std::span<const NodeId> nodes() const noexcept { return nodes_; }
  // Sorted by (t, source, target).
  std::span<const Link> links() const noexcept { return links_; }
  bool empty() const noexcept { return links_.empty(); }
  bool has_node(NodeId v) const;
  bool weighted() const noexcept { return weighted_; }

  // Optional key table shared by all streams of one dataset; used for
  // diagnostics and exports.
  const std::shared_ptr<const KeyTable>& keys() const noexcept { return keys_; }
  std::string key(NodeId v) const;

  // Links equal to (t, source, target), in stored order.
  std::span<const Link> find(TimeInstant t, NodeId source, NodeId target) const;

 private:
  friend class StreamBuilder;

  Interval interval_;
  std::vector<NodeId> nodes_;
  std::vector<Link> links_;
  bool weighted_ = false;
  std::shared_ptr<const KeyTable> keys_;
};

struct StreamOptions {
  std::optional<Interval> interval;
  // Explicit node set; must contain every endpoint. Defaults to the endpoints.
  std::optional<std::vector<NodeId>> nodes;
  std::shared_ptr<const KeyTable> keys;
};

// Validates and sorts links into a stream. Throws InvalidLinkError for
// self-links, links outside an explicit interval, negative times, endpoints
// missing from an explicit node set, or mixed weighted/unweighted links;
// ParameterError when links are empty and no interval is given.
LinkStream build_stream(std::vector<Link> links, StreamOptions options = {});

// Internal construction path for already-validated derived streams.
class StreamBuilder {
 public:
  static LinkStream derive(const LinkStream& parent, std::vector<NodeId> nodes,
                           std::vector<Link> links);
  static LinkStream assemble(Interval interval, std::vector<NodeId> nodes,
                             std::vector<Link> links, bool weighted,
                             std::shared_ptr<const KeyTable> keys);
};

enum class NodeClass : std::uint8_t { Member, Anonymous };

const char* to_string(NodeClass c);

// Partition of a node set into members M and anonymous wallets A.
class NodeClassification {
 public:
  NodeClassification() = default;
  NodeClassification(std::vector<NodeId> members, std::vector<NodeId> anonymous,
                     std::shared_ptr<const KeyTable> keys = nullptr);

  std::span<const NodeId> members() const noexcept { return members_; }
  std::span<const NodeId> anonymous() const noexcept { return anonymous_; }
  std::optional<NodeClass> class_of(NodeId v) const;
  bool is_member(NodeId v) const { return class_of(v) == NodeClass::Member; }
  const std::shared_ptr<const KeyTable>& keys() const noexcept { return keys_; }

 private:
  std::vector<NodeId> members_;
  std::vector<NodeId> anonymous_;
  // Indexed by NodeId::value; 0 unknown, 1 member, 2 anonymous.
  std::vector<std::uint8_t> lookup_;
  std::shared_ptr<const KeyTable> keys_;
};

// Links whose source is in src_class and target in dst_class. The node set is
// restricted to the stream nodes belonging to either class; the interval is
// unchanged. Throws ClassificationError on an unclassified node.
LinkStream substream_by_class(const LinkStream& s, const NodeClassification& cls,
                              NodeClass src_class, NodeClass dst_class);

// Number of distinct (u, v) pairs linked exactly at t.
std::size_t activity(const LinkStream& s, TimeInstant t);

struct TimeSeries {
  TimeInstant start = 0;
  Duration bin_width = 1;
  std::vector<std::int64_t> values;

  TimeInstant bin_start(std::size_t i) const {
    return start + static_cast<TimeInstant>(i) * bin_width;
  }
  std::int64_t total() const;
};

// Link counts per bin of width bin_width, aligned to the interval start.
TimeSeries activity_series(const LinkStream& s, Duration bin_width);

// Right-aligned rolling sum over bins starting in (b - window, b].
TimeSeries rolling_sum(const TimeSeries& series, Duration window);

// Static directed graph G(L) with a symmetrised view. Node-local indices
// 0..n-1 follow the sorted node order.
class InducedGraph {
 public:
  using Edge = std::pair<NodeId, NodeId>;

  InducedGraph() = default;
  // Directed edges; duplicates are collapsed, self-loops rejected.
  InducedGraph(std::vector<NodeId> nodes, std::vector<Edge> directed_edges);
  // Each pair is inserted in both directions.
  static InducedGraph undirected(std::vector<NodeId> nodes,
                                 const std::vector<Edge>& edges);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::span<const NodeId> nodes() const noexcept { return nodes_; }
  NodeId node(std::size_t local) const { return nodes_[local]; }
  std::optional<std::size_t> local_index(NodeId v) const;

  // Sorted, deduplicated.
  std::span<const Edge> directed_edges() const noexcept { return edges_; }
  std::size_t undirected_edge_count() const noexcept { return und_targets_.size() / 2; }

  // Local-index adjacency, each list sorted ascending.
  std::span<const std::uint32_t> out_neighbors(std::size_t local) const;
  std::span<const std::uint32_t> in_neighbors(std::size_t local) const;
  std::span<const std::uint32_t> neighbors(std::size_t local) const;

 private:
  static void build_csr(std::size_t n,
                        const std::vector<std::pair<std::uint32_t, std::uint32_t>>& arcs,
                        std::vector<std::uint32_t>& offsets,
                        std::vector<std::uint32_t>& targets);

  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> out_offsets_, out_targets_;
  std::vector<std::uint32_t> in_offsets_, in_targets_;
  std::vector<std::uint32_t> und_offsets_, und_targets_;
};

InducedGraph induced_graph(const LinkStream& s);

}  // namespace lsl

template <>
struct std::hash<lsl::NodeId> {
  std::size_t operator()(lsl::NodeId v) const noexcept {
    return std::hash<std::uint32_t>{}(v.value);
  }
};
