#include "lsledger/ingest.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "lsledger/error.hpp"
#include "lsledger/util/csv.hpp"

namespace lsl {

namespace {

using nlohmann::json;

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

TimeInstant read_time(const json& obj) {
  auto it = obj.find("time");
  if (it == obj.end()) throw FieldError("missing field 'time'");
  if (!it->is_number_integer()) throw FieldError("field 'time' is not an integer");
  if (it->is_number_unsigned()) {
    const auto v = it->get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(INT64_MAX)) throw FieldError("field 'time' out of range");
    return static_cast<TimeInstant>(v);
  }
  const auto v = it->get<std::int64_t>();
  if (v < 0) throw FieldError("field 'time' is negative");
  return v;
}

std::string read_string(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw FieldError(fmt::format("missing field '{}'", name));
  if (!it->is_string()) throw FieldError(fmt::format("field '{}' is not a string", name));
  auto s = it->get<std::string>();
  if (s.empty()) throw FieldError(fmt::format("field '{}' is empty", name));
  return s;
}

Amount read_amount(const json& obj) {
  auto it = obj.find("amount");
  if (it == obj.end()) throw FieldError("missing field 'amount'");
  if (!it->is_number_integer()) throw FieldError("field 'amount' is not an integer");
  if (it->is_number_unsigned()) {
    const auto v = it->get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(INT64_MAX)) throw FieldError("field 'amount' out of range");
    return static_cast<Amount>(v);
  }
  const auto v = it->get<std::int64_t>();
  if (v < 0) throw FieldError("negative amount");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

}  // namespace

LedgerRecords parse_records(std::istream& in, ParseMode mode) {
  LedgerRecords out;
  std::unordered_set<std::string> identity_keys;
  std::unordered_set<std::string> identity_uids;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    try {
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error&) {
        throw FieldError("not a JSON object");
      }
      if (!obj.is_object()) throw FieldError("not a JSON object");
      const std::string type = read_string(obj, "type");
      if (type == "identity") {
        IdentityRecord rec{read_time(obj), read_string(obj, "key"), read_string(obj, "uid")};
        if (identity_keys.contains(rec.key)) throw FieldError(fmt::format("duplicate identity key '{}'", rec.key));
        if (identity_uids.contains(rec.uid)) throw FieldError(fmt::format("duplicate identity uid '{}'", rec.uid));
        identity_keys.insert(rec.key);
        identity_uids.insert(rec.uid);
        out.identities.push_back(std::move(rec));
      } else if (type == "cert") {
        CertificationRecord rec{read_time(obj), read_string(obj, "from"), read_string(obj, "to")};
        if (rec.from == rec.to) throw FieldError("self-certification");
        out.certifications.push_back(std::move(rec));
      } else if (type == "tx") {
        TransactionRecord rec{read_time(obj), read_string(obj, "from"), read_string(obj, "to"),
                              read_amount(obj)};
        if (rec.from == rec.to) throw FieldError("self-transaction");
        out.transactions.push_back(std::move(rec));
      } else {
        throw FieldError(fmt::format("unknown record type '{}'", type));
      }
    } catch (const FieldError& e) {
      if (mode == ParseMode::Strict) throw ParseError(line_no, e.what());
      out.issues.push_back({line_no, e.what()});
    }
  }
  return out;
}

void serialize_records(const LedgerRecords& records, std::ostream& out) {
  using ordered = nlohmann::ordered_json;
  for (const auto& r : records.identities) {
    ordered j;
    j["type"] = "identity";
    j["time"] = r.t;
    j["key"] = r.key;
    j["uid"] = r.uid;
    out << j.dump() << '\n';
  }
  for (const auto& r : records.certifications) {
    ordered j;
    j["type"] = "cert";
    j["time"] = r.t;
    j["from"] = r.from;
    j["to"] = r.to;
    out << j.dump() << '\n';
  }
  for (const auto& r : records.transactions) {
    ordered j;
    j["type"] = "tx";
    j["time"] = r.t;
    j["from"] = r.from;
    j["to"] = r.to;
    j["amount"] = r.amount;
    out << j.dump() << '\n';
  }
}

NodeClassification classify_keys(const std::vector<IdentityRecord>& identities,
                                 const std::vector<TransactionRecord>& transactions) {
  auto keys = std::make_shared<KeyTable>();
  std::vector<NodeId> members;
  members.reserve(identities.size());
  for (const auto& id : identities) members.push_back(keys->intern(id.key));
  const std::size_t member_count = keys->size();

  std::vector<NodeId> anonymous;
  for (const auto& tx : transactions) {
    for (const auto* k : {&tx.from, &tx.to}) {
      const NodeId v = keys->intern(*k);
      if (v.value >= member_count) anonymous.push_back(v);
    }
  }
  return NodeClassification(std::move(members), std::move(anonymous), std::move(keys));
}

LedgerStreams build_streams(const LedgerRecords& records, const NodeClassification& cls) {
  const auto& keys = cls.keys();
  if (!keys) throw StateError("classification carries no key table");

  auto member_of = [&](const std::string& key) {
    auto id = keys->find(key);
    if (!id || !cls.is_member(*id)) {
      throw IntegrityError(fmt::format("certification involves non-member key '{}'", key));
    }
    return *id;
  };
  std::vector<Link> certs;
  certs.reserve(records.certifications.size());
  for (const auto& c : records.certifications) {
    certs.push_back({c.t, member_of(c.from), member_of(c.to), std::nullopt});
  }

  auto node_of = [&](const std::string& key) {
    auto id = keys->find(key);
    if (!id || !cls.class_of(*id)) {
      throw ClassificationError(fmt::format("unclassified key '{}'", key));
    }
    return *id;
  };
  std::vector<Link> txs;
  txs.reserve(records.transactions.size());
  for (const auto& tx : records.transactions) {
    txs.push_back({tx.t, node_of(tx.from), node_of(tx.to), tx.amount});
  }

  std::vector<NodeId> all_nodes(cls.members().begin(), cls.members().end());
  all_nodes.insert(all_nodes.end(), cls.anonymous().begin(), cls.anonymous().end());

  auto span_of = [](const std::vector<Link>& links) -> std::optional<Interval> {
    if (!links.empty()) return std::nullopt;
    return Interval{0, 0};
  };

  StreamOptions cert_options{span_of(certs),
                             std::vector<NodeId>(cls.members().begin(), cls.members().end()), keys};
  StreamOptions tx_options{span_of(txs), std::move(all_nodes), keys};

  LedgerStreams out;
  out.certifications = build_stream(std::move(certs), std::move(cert_options));
  out.transactions = build_stream(std::move(txs), std::move(tx_options));
  return out;
}

const char* to_string(Substream s) {
  switch (s) {
    case Substream::MM: return "MM";
    case Substream::MA: return "MA";
    case Substream::AM: return "AM";
    case Substream::AA: return "AA";
  }
  return "?";
}

LinkStream substream(const LinkStream& transactions, const NodeClassification& cls,
                     Substream which) {
  switch (which) {
    case Substream::MM:
      return substream_by_class(transactions, cls, NodeClass::Member, NodeClass::Member);
    case Substream::MA:
      return substream_by_class(transactions, cls, NodeClass::Member, NodeClass::Anonymous);
    case Substream::AM:
      return substream_by_class(transactions, cls, NodeClass::Anonymous, NodeClass::Member);
    case Substream::AA:
      return substream_by_class(transactions, cls, NodeClass::Anonymous, NodeClass::Anonymous);
  }
  throw ParameterError("unknown substream");
}

RepartitionReport repartition(const LinkStream& transactions, const NodeClassification& cls) {
  RepartitionReport report;
  for (std::size_t i = 0; i < 4; ++i) report.rows[i].substream = kSubstreams[i];

  for (const Link& l : transactions.links()) {
    const auto src = cls.class_of(l.source);
    const auto dst = cls.class_of(l.target);
    if (!src || !dst) {
      throw ClassificationError(fmt::format(
          "unclassified node '{}'", transactions.key(!src ? l.source : l.target)));
    }
    const std::size_t idx = (*src == NodeClass::Member ? 0 : 2) + (*dst == NodeClass::Member ? 0 : 1);
    auto& row = report.rows[idx];
    ++row.count;
    row.amount += l.amount.value_or(0);
    ++report.total_count;
    report.total_amount += l.amount.value_or(0);
  }
  for (auto& row : report.rows) {
    if (report.total_count > 0) {
      row.count_share = static_cast<double>(row.count) / static_cast<double>(report.total_count);
    }
    if (report.total_amount > 0) {
      row.amount_share = static_cast<double>(row.amount) / static_cast<double>(report.total_amount);
    }
  }
  return report;
}

void write_repartition_csv(const RepartitionReport& report, std::ostream& out) {
  out << "substream,count,count_share,amount,amount_share\n";
  for (const auto& row : report.rows) {
    out << to_string(row.substream) << ',' << row.count << ',' << csv::fixed4(row.count_share)
        << ',' << row.amount << ',' << csv::fixed4(row.amount_share) << '\n';
  }
}

LinkStream filter_wallet(const LinkStream& s, NodeId w) {
  std::vector<NodeId> nodes;
  nodes.reserve(s.nodes().size());
  for (NodeId v : s.nodes()) {
    if (v != w) nodes.push_back(v);
  }
  std::vector<Link> links;
  links.reserve(s.links().size());
  for (const Link& l : s.links()) {
    if (l.source != w && l.target != w) links.push_back(l);
  }
  return StreamBuilder::derive(s, std::move(nodes), std::move(links));
}

std::vector<NodeId> identify_miners(const LinkStream& transactions,
                                    const NodeClassification& cls, NodeId wallet) {
  if (!transactions.has_node(wallet)) {
    throw LookupError(fmt::format("wallet '{}' does not appear in the stream",
                                  transactions.key(wallet)));
  }
  std::vector<NodeId> miners;
  for (const Link& l : transactions.links()) {
    if (l.source == wallet && cls.is_member(l.target)) miners.push_back(l.target);
  }
  std::sort(miners.begin(), miners.end());
  miners.erase(std::unique(miners.begin(), miners.end()), miners.end());
  return miners;
}

std::vector<MembershipFlag> validate_membership(const LinkStream& certifications,
                                                const NodeClassification& cls,
                                                std::size_t min_certs) {
  std::vector<MembershipFlag> flagged;
  if (min_certs == 0) return flagged;
  const InducedGraph g = induced_graph(certifications);
  for (NodeId m : cls.members()) {
    std::size_t in = 0;
    if (auto local = g.local_index(m)) in = g.in_neighbors(*local).size();
    if (in < min_certs) flagged.push_back({m, in});
  }
  return flagged;
}

}  // namespace lsl
