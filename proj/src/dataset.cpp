#include "lsledger/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include <fmt/format.h>

#include "lsledger/error.hpp"

namespace lsl {

Dataset build_dataset(const LedgerRecords& records) {
  Dataset d;
  d.classification = classify_keys(records.identities, records.transactions);
  d.keys = d.classification.keys();
  auto streams = build_streams(records, d.classification);
  d.certifications = std::move(streams.certifications);
  d.transactions = std::move(streams.transactions);
  for (Substream s : kSubstreams) {
    d.substreams[static_cast<std::size_t>(s)] = substream(d.transactions, d.classification, s);
  }
  return d;
}

namespace {

static_assert(std::endian::native == std::endian::little, "snapshot format assumes little-endian");

constexpr char kMagic[8] = {'L', 'S', 'L', 'S', 'N', 'A', 'P', '\x01'};

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  }

  template <typename T>
  void put(T value) {
    out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
  }
  void put_string(const std::string& s) {
    put(static_cast<std::uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void put_raw(const char* data, std::size_t n) { out_.write(data, static_cast<std::streamsize>(n)); }
  void finish(const std::filesystem::path& path) {
    out_.flush();
    if (!out_) throw IoError(fmt::format("failed writing '{}'", path.string()));
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw StateError(fmt::format("snapshot '{}' not found; run ingest first", path.string()));
  }

  template <typename T>
  T get() {
    T value{};
    in_.read(reinterpret_cast<char*>(&value), sizeof(T));
    check();
    return value;
  }
  std::string get_string() {
    const auto n = get<std::uint32_t>();
    std::string s(n, '\0');
    in_.read(s.data(), n);
    check();
    return s;
  }
  void get_raw(char* data, std::size_t n) {
    in_.read(data, static_cast<std::streamsize>(n));
    check();
  }

 private:
  void check() {
    if (!in_) throw StateError(fmt::format("snapshot '{}' is truncated or corrupt", path_.string()));
  }

  std::ifstream in_;
  std::filesystem::path path_;
};

void put_ids(Writer& w, std::span<const NodeId> ids) {
  w.put(static_cast<std::uint32_t>(ids.size()));
  for (NodeId v : ids) w.put(v.value);
}

std::vector<NodeId> get_ids(Reader& r) {
  std::vector<NodeId> ids(r.get<std::uint32_t>());
  for (auto& v : ids) v.value = r.get<std::uint32_t>();
  return ids;
}

void put_stream(Writer& w, const LinkStream& s) {
  w.put(s.interval().begin);
  w.put(s.interval().end);
  w.put(static_cast<std::uint8_t>(s.weighted()));
  put_ids(w, s.nodes());
  const auto links = s.links();
  w.put(static_cast<std::uint64_t>(links.size()));
  for (const Link& l : links) w.put(l.t);
  for (const Link& l : links) w.put(l.source.value);
  for (const Link& l : links) w.put(l.target.value);
  if (s.weighted()) {
    for (const Link& l : links) w.put(*l.amount);
  }
}

LinkStream get_stream(Reader& r, const std::shared_ptr<const KeyTable>& keys) {
  Interval iv;
  iv.begin = r.get<TimeInstant>();
  iv.end = r.get<TimeInstant>();
  const bool weighted = r.get<std::uint8_t>() != 0;
  auto nodes = get_ids(r);
  std::vector<Link> links(r.get<std::uint64_t>());
  for (auto& l : links) l.t = r.get<TimeInstant>();
  for (auto& l : links) l.source.value = r.get<std::uint32_t>();
  for (auto& l : links) l.target.value = r.get<std::uint32_t>();
  if (weighted) {
    for (auto& l : links) l.amount = r.get<Amount>();
  }
  try {
    return build_stream(std::move(links), {iv, std::move(nodes), keys});
  } catch (const Error& e) {
    throw StateError(fmt::format("corrupt snapshot stream: {}", e.what()));
  }
}

}  // namespace

void write_snapshot(const Dataset& data, const std::filesystem::path& path) {
  Writer w(path);
  w.put_raw(kMagic, sizeof(kMagic));
  const auto& keys = *data.keys;
  w.put(static_cast<std::uint32_t>(keys.size()));
  for (std::uint32_t i = 0; i < keys.size(); ++i) w.put_string(keys.key(NodeId{i}));
  put_ids(w, data.classification.members());
  put_ids(w, data.classification.anonymous());
  put_stream(w, data.certifications);
  put_stream(w, data.transactions);

  // Substreams as ordered index columns into the transaction stream.
  const auto all = data.transactions.links();
  for (Substream s : kSubstreams) {
    const auto& sub = data.sub(s);
    w.put(static_cast<std::uint64_t>(sub.links().size()));
    std::size_t cursor = 0;
    for (const Link& l : sub.links()) {
      while (cursor < all.size() && !(all[cursor] == l)) ++cursor;
      w.put(static_cast<std::uint64_t>(cursor++));
    }
  }
  w.finish(path);
}

Dataset read_snapshot(const std::filesystem::path& path) {
  Reader r(path);
  char magic[sizeof(kMagic)];
  r.get_raw(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw StateError(fmt::format("'{}' is not a snapshot file", path.string()));
  }
  auto keys = std::make_shared<KeyTable>();
  const auto key_count = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < key_count; ++i) keys->intern(r.get_string());
  if (keys->size() != key_count) throw StateError("snapshot key table has duplicates");

  Dataset d;
  d.keys = keys;
  auto members = get_ids(r);
  auto anonymous = get_ids(r);
  d.classification = NodeClassification(std::move(members), std::move(anonymous), keys);
  d.certifications = get_stream(r, keys);
  d.transactions = get_stream(r, keys);

  const auto all = d.transactions.links();
  for (Substream s : kSubstreams) {
    const auto n = r.get<std::uint64_t>();
    std::vector<Link> links;
    links.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto idx = r.get<std::uint64_t>();
      if (idx >= all.size()) throw StateError("snapshot substream index out of range");
      links.push_back(all[idx]);
    }
    // Node set follows the same rule as substream_by_class.
    auto full = substream(d.transactions, d.classification, s);
    if (full.links().size() != links.size()) throw StateError("snapshot substream inconsistent with classification");
    d.substreams[static_cast<std::size_t>(s)] = StreamBuilder::derive(
        d.transactions, std::vector<NodeId>(full.nodes().begin(), full.nodes().end()), std::move(links));
  }
  return d;
}

}  // namespace lsl
