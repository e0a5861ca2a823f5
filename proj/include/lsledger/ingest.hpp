#pragma once

// Ledger records: line-delimited JSON parsing, key classification, stream
// construction and transaction repartition.

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "lsledger/stream.hpp"

namespace lsl {

struct IdentityRecord {
  TimeInstant t = 0;
  std::string key;
  std::string uid;
  friend bool operator==(const IdentityRecord&, const IdentityRecord&) = default;
};

struct CertificationRecord {
  TimeInstant t = 0;
  std::string from;
  std::string to;
  friend bool operator==(const CertificationRecord&, const CertificationRecord&) = default;
};

struct TransactionRecord {
  TimeInstant t = 0;
  std::string from;
  std::string to;
  Amount amount = 0;
  friend bool operator==(const TransactionRecord&, const TransactionRecord&) = default;
};

struct ParseIssue {
  std::size_t line = 0;
  std::string message;
};

struct LedgerRecords {
  std::vector<IdentityRecord> identities;
  std::vector<CertificationRecord> certifications;
  std::vector<TransactionRecord> transactions;
  // Lines skipped in lenient mode.
  std::vector<ParseIssue> issues;
};

enum class ParseMode { Strict, Lenient };

// Single pass over the input. In strict mode the first malformed line throws
// ParseError; in lenient mode it is recorded in `issues` and skipped.
LedgerRecords parse_records(std::istream& in, ParseMode mode = ParseMode::Strict);

// Writes identities, then certifications, then transactions, one record per line.
void serialize_records(const LedgerRecords& records, std::ostream& out);

// M = identity keys; A = transaction endpoints without an identity. Keys are
// interned in order of first appearance (identities first).
NodeClassification classify_keys(const std::vector<IdentityRecord>& identities,
                                 const std::vector<TransactionRecord>& transactions);

struct LedgerStreams {
  LinkStream certifications;  // over M
  LinkStream transactions;    // over V
};

// Throws IntegrityError when a certification endpoint is not a member.
LedgerStreams build_streams(const LedgerRecords& records, const NodeClassification& cls);

enum class Substream : std::uint8_t { MM, MA, AM, AA };
inline constexpr std::array<Substream, 4> kSubstreams{Substream::MM, Substream::MA,
                                                      Substream::AM, Substream::AA};
const char* to_string(Substream s);
LinkStream substream(const LinkStream& transactions, const NodeClassification& cls,
                     Substream which);

struct SubstreamShare {
  Substream substream = Substream::MM;
  std::size_t count = 0;
  double count_share = 0.0;
  Amount amount = 0;
  double amount_share = 0.0;
};

struct RepartitionReport {
  std::array<SubstreamShare, 4> rows{};
  std::size_t total_count = 0;
  Amount total_amount = 0;

  const SubstreamShare& operator[](Substream s) const {
    return rows[static_cast<std::size_t>(s)];
  }
};

// Shares are 0 when the corresponding total is 0.
RepartitionReport repartition(const LinkStream& transactions, const NodeClassification& cls);
void write_repartition_csv(const RepartitionReport& report, std::ostream& out);

// Removes every link touching w and w itself from the node set.
LinkStream filter_wallet(const LinkStream& s, NodeId w);

// Members receiving at least one transaction from the wallet. Throws
// LookupError when the wallet is not a node of the stream.
std::vector<NodeId> identify_miners(const LinkStream& transactions,
                                    const NodeClassification& cls, NodeId wallet);

struct MembershipFlag {
  NodeId member;
  std::size_t in_degree = 0;
};

// Members whose number of distinct certifiers is below min_certs.
std::vector<MembershipFlag> validate_membership(const LinkStream& certifications,
                                                const NodeClassification& cls,
                                                std::size_t min_certs);

}  // namespace lsl
