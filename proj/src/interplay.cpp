#include "lsledger/interplay.hpp"

#include <algorithm>
#include <iterator>

#include <fmt/format.h>

#include "lsledger/error.hpp"

namespace lsl {

namespace {

// Link times per unordered pair, pairs sorted, times ascending.
class PairTimeline {
 public:
  explicit PairTimeline(const LinkStream& s) {
    std::vector<std::pair<UnorderedPair, TimeInstant>> flat;
    flat.reserve(s.links().size());
    for (const Link& l : s.links()) flat.emplace_back(UnorderedPair::of(l.source, l.target), l.t);
    std::sort(flat.begin(), flat.end());
    for (const auto& [pair, t] : flat) {
      if (entries_.empty() || entries_.back().first != pair) entries_.push_back({pair, {}});
      entries_.back().second.push_back(t);
    }
  }

  const std::vector<TimeInstant>* find(UnorderedPair pair) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), pair,
                               [](const auto& e, const UnorderedPair& p) { return e.first < p; });
    if (it == entries_.end() || it->first != pair) return nullptr;
    return &it->second;
  }

  const auto& entries() const { return entries_; }

 private:
  std::vector<std::pair<UnorderedPair, std::vector<TimeInstant>>> entries_;
};

// Signed offset (t - anchor) of the time closest to anchor; ties go to the
// earlier time.
std::optional<Duration> closest_offset(const std::vector<TimeInstant>& times, TimeInstant anchor) {
  if (times.empty()) return std::nullopt;
  auto pos = std::lower_bound(times.begin(), times.end(), anchor);
  std::optional<Duration> best;
  if (pos != times.begin()) best = *std::prev(pos) - anchor;
  if (pos != times.end()) {
    const Duration after = *pos - anchor;
    if (!best || after < -*best) best = after;
  }
  return best;
}

template <typename Category, std::size_t N>
void normalise(const std::array<std::size_t, N>& counts, std::array<double, N>& fractions) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  for (std::size_t i = 0; i < N; ++i) {
    fractions[i] = total ? static_cast<double>(counts[i]) / static_cast<double>(total) : 0.0;
  }
}

}  // namespace

RelationSets relation_sets(const LinkStream& s) {
  std::vector<std::pair<NodeId, NodeId>> directed;
  directed.reserve(s.links().size());
  for (const Link& l : s.links()) directed.emplace_back(l.source, l.target);
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  RelationSets r;
  for (const auto& [a, b] : directed) {
    const bool reverse = std::binary_search(directed.begin(), directed.end(), std::pair{b, a});
    if (reverse) {
      // Record each bidirectional pair once, from its lower endpoint.
      if (a < b) r.bi.push_back({a, b});
    } else {
      r.uni.push_back(UnorderedPair::of(a, b));
    }
  }
  std::sort(r.uni.begin(), r.uni.end());
  std::sort(r.bi.begin(), r.bi.end());
  std::merge(r.uni.begin(), r.uni.end(), r.bi.begin(), r.bi.end(), std::back_inserter(r.any));
  return r;
}

RelationSets relation_sets(const LinkStream& s, const NodeClassification& cls) {
  for (const Link& l : s.links()) {
    for (NodeId v : {l.source, l.target}) {
      if (!cls.is_member(v)) {
        throw ClassificationError(fmt::format("non-member endpoint '{}'", s.key(v)));
      }
    }
  }
  return relation_sets(s);
}

namespace {

std::size_t intersection_size(const std::vector<UnorderedPair>& a, const std::vector<UnorderedPair>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

RatioCell cell(std::string name, std::size_t num, std::uint64_t den) {
  RatioCell c{std::move(name), num, static_cast<std::size_t>(den), std::nullopt};
  if (den > 0) c.value = static_cast<double>(num) / static_cast<double>(den);
  return c;
}

}  // namespace

RatioTable relation_ratio_table(const RelationSets& certs, const RelationSets& txs,
                                std::size_t n_members, PairConvention convention) {
  if (n_members < 2) throw ParameterError("ratio table needs at least two members");
  RatioTable t;
  t.convention = convention;
  const auto n = static_cast<std::uint64_t>(n_members);
  t.member_pairs = convention == PairConvention::Unordered ? n * (n - 1) / 2 : n * (n - 1);
  const auto mm = t.member_pairs;

  t.cells = {
      cell("C_any/MxM", certs.any.size(), mm),
      cell("C_uni/MxM", certs.uni.size(), mm),
      cell("C_bi/MxM", certs.bi.size(), mm),
      cell("T_any/MxM", txs.any.size(), mm),
      cell("T_uni/MxM", txs.uni.size(), mm),
      cell("T_bi/MxM", txs.bi.size(), mm),
      cell("T_any&C_any/C_any", intersection_size(txs.any, certs.any), certs.any.size()),
      cell("T_any&C_uni/C_uni", intersection_size(txs.any, certs.uni), certs.uni.size()),
      cell("T_any&C_bi/C_bi", intersection_size(txs.any, certs.bi), certs.bi.size()),
      cell("C_any&T_any/T_any", intersection_size(certs.any, txs.any), txs.any.size()),
      cell("C_any&T_uni/T_uni", intersection_size(certs.any, txs.uni), txs.uni.size()),
      cell("C_any&T_bi/T_bi", intersection_size(certs.any, txs.bi), txs.bi.size()),
  };
  return t;
}

PairTransactionCount pair_transaction_counts(const LinkStream& transactions) {
  PairTransactionCount out;
  const PairTimeline timeline(transactions);
  for (const auto& [pair, times] : timeline.entries()) {
    out.push_back({pair, times.size()});
  }
  return out;
}

std::vector<KFraction> certification_fraction_by_k(const PairTransactionCount& tau,
                                                   const RelationSets& certs) {
  std::vector<KFraction> rows;
  auto row_for = [&](std::size_t k) -> KFraction& {
    auto it = std::lower_bound(rows.begin(), rows.end(), k,
                               [](const KFraction& r, std::size_t x) { return r.k < x; });
    if (it == rows.end() || it->k != k) it = rows.insert(it, KFraction{k});
    return *it;
  };
  for (const auto& [pair, count] : tau) {
    if (count == 0) continue;
    auto& row = row_for(count);
    ++row.n_pairs;
    if (std::binary_search(certs.any.begin(), certs.any.end(), pair)) ++row.n_any;
    if (std::binary_search(certs.bi.begin(), certs.bi.end(), pair)) ++row.n_bi;
  }
  for (auto& row : rows) {
    row.frac_any = static_cast<double>(row.n_any) / static_cast<double>(row.n_pairs);
    row.frac_bi = static_cast<double>(row.n_bi) / static_cast<double>(row.n_pairs);
  }
  return rows;
}

const char* to_string(MatchCategory c) {
  switch (c) {
    case MatchCategory::Before: return "before";
    case MatchCategory::After: return "after";
    case MatchCategory::Never: return "never";
  }
  return "?";
}

const char* to_string(TxCategory c) {
  switch (c) {
    case TxCategory::AlreadyCertified: return "already_certified";
    case TxCategory::FutureCertified: return "future_certified";
    case TxCategory::Never: return "never";
  }
  return "?";
}

MatchReport match_certifications(const LinkStream& certifications, const LinkStream& transactions) {
  const PairTimeline certs(certifications);
  const PairTimeline txs(transactions);
  MatchReport report;
  report.outcomes.reserve(certs.entries().size());
  for (const auto& [pair, cert_times] : certs.entries()) {
    MatchOutcome o{pair, cert_times.front(), MatchCategory::Never, std::nullopt, 0};
    if (const auto* times = txs.find(pair)) {
      const auto first_at_or_after = std::lower_bound(times->begin(), times->end(), o.anchor);
      o.preceding = static_cast<std::size_t>(first_at_or_after - times->begin());
      const bool has_after = first_at_or_after != times->end();
      if (o.preceding > 0) {
        o.category = MatchCategory::Before;
        if (has_after) ++report.both_sided;
      } else if (has_after) {
        o.category = MatchCategory::After;
      }
      o.delay = closest_offset(*times, o.anchor);
    }
    ++report.counts[static_cast<std::size_t>(o.category)];
    report.outcomes.push_back(o);
  }
  normalise<MatchCategory>(report.counts, report.fractions);
  return report;
}

std::size_t preceding_transaction_count(UnorderedPair pair, TimeInstant anchor,
                                        const LinkStream& transactions) {
  std::size_t n = 0;
  for (const Link& l : transactions.links()) {
    if (l.t >= anchor) break;
    if (UnorderedPair::of(l.source, l.target) == pair) ++n;
  }
  return n;
}

TxClassReport classify_transactions(const LinkStream& transactions,
                                    const LinkStream& certifications) {
  const PairTimeline certs(certifications);
  TxClassReport report;
  report.categories.reserve(transactions.links().size());
  for (const Link& l : transactions.links()) {
    TxCategory c = TxCategory::Never;
    if (const auto* times = certs.find(UnorderedPair::of(l.source, l.target))) {
      c = times->front() <= l.t ? TxCategory::AlreadyCertified : TxCategory::FutureCertified;
    }
    ++report.counts[static_cast<std::size_t>(c)];
    report.categories.push_back(c);
  }
  normalise<TxCategory>(report.counts, report.fractions);
  return report;
}

NewTransactionDelays new_transaction_cert_delays(const LinkStream& transactions,
                                                 const LinkStream& certifications) {
  const PairTimeline certs(certifications);
  NewTransactionDelays out;
  const PairTimeline txs(transactions);
  for (const auto& [pair, times] : txs.entries()) {
    NewTransactionDelay d{pair, times.front(), std::nullopt};
    if (const auto* cert_times = certs.find(pair)) d.delay = closest_offset(*cert_times, d.first_transaction);
    if (!d.delay) ++out.unmatched;
    out.entries.push_back(d);
  }
  return out;
}

}  // namespace lsl
