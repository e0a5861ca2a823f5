#pragma once

// Cross-stream analyses between the certification stream and the
// member-to-member transaction stream.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lsledger/stream.hpp"

namespace lsl {

struct UnorderedPair {
  NodeId lo;
  NodeId hi;

  static UnorderedPair of(NodeId a, NodeId b) { return a < b ? UnorderedPair{a, b} : UnorderedPair{b, a}; }
  friend constexpr auto operator<=>(const UnorderedPair&, const UnorderedPair&) = default;
};

struct RelationSets {
  // All three sorted.
  std::vector<UnorderedPair> any;
  std::vector<UnorderedPair> uni;
  std::vector<UnorderedPair> bi;
};

// Throws ClassificationError when an endpoint is not a member.
RelationSets relation_sets(const LinkStream& s, const NodeClassification& cls);
// Same, without a membership check.
RelationSets relation_sets(const LinkStream& s);

enum class PairConvention { Unordered, Ordered };

struct RatioCell {
  std::string name;
  std::size_t numerator = 0;
  std::size_t denominator = 0;
  // nullopt when the denominator set is empty.
  std::optional<double> value;
};

struct RatioTable {
  PairConvention convention = PairConvention::Unordered;
  std::uint64_t member_pairs = 0;
  // Row-major, 4 rows x 3 columns mirroring the any/uni/bi layout.
  std::array<RatioCell, 12> cells;
};

// Throws ParameterError for n_members < 2.
RatioTable relation_ratio_table(const RelationSets& certs, const RelationSets& txs,
                                std::size_t n_members,
                                PairConvention convention = PairConvention::Unordered);

struct PairCount {
  UnorderedPair pair;
  std::size_t count = 0;
};

// Transactions per unordered pair, both directions, sorted by pair.
using PairTransactionCount = std::vector<PairCount>;
PairTransactionCount pair_transaction_counts(const LinkStream& transactions);

struct KFraction {
  std::size_t k = 0;
  std::size_t n_pairs = 0;
  std::size_t n_any = 0;
  std::size_t n_bi = 0;
  double frac_any = 0.0;
  double frac_bi = 0.0;
};

// One row per k with at least one pair, ascending k.
std::vector<KFraction> certification_fraction_by_k(const PairTransactionCount& tau,
                                                   const RelationSets& certs);

enum class MatchCategory { Before, After, Never };
const char* to_string(MatchCategory c);

struct MatchOutcome {
  UnorderedPair pair;
  TimeInstant anchor = 0;
  MatchCategory category = MatchCategory::Never;
  // Transaction time minus anchor, for the transaction closest in absolute
  // time (ties toward the earlier one); absent iff category is Never.
  std::optional<Duration> delay;
  // Transactions strictly before the anchor.
  std::size_t preceding = 0;
};

struct MatchReport {
  // Sorted by pair.
  std::vector<MatchOutcome> outcomes;
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> fractions{};
  // Pairs with transactions on both sides of the anchor (classified Before).
  std::size_t both_sided = 0;

  double fraction(MatchCategory c) const { return fractions[static_cast<std::size_t>(c)]; }
};

MatchReport match_certifications(const LinkStream& certifications, const LinkStream& transactions);

std::size_t preceding_transaction_count(UnorderedPair pair, TimeInstant anchor,
                                        const LinkStream& transactions);

enum class TxCategory { AlreadyCertified, FutureCertified, Never };
const char* to_string(TxCategory c);

struct TxClassReport {
  // One per transaction, stream order.
  std::vector<TxCategory> categories;
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> fractions{};

  double fraction(TxCategory c) const { return fractions[static_cast<std::size_t>(c)]; }
};

TxClassReport classify_transactions(const LinkStream& transactions,
                                    const LinkStream& certifications);

struct NewTransactionDelay {
  UnorderedPair pair;
  TimeInstant first_transaction = 0;
  // Certification time minus first transaction time; nullopt when unmatched.
  std::optional<Duration> delay;
};

struct NewTransactionDelays {
  // Sorted by pair.
  std::vector<NewTransactionDelay> entries;
  std::size_t unmatched = 0;
};

NewTransactionDelays new_transaction_cert_delays(const LinkStream& transactions,
                                                 const LinkStream& certifications);

}  // namespace lsl
