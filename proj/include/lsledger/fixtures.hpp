#pragma once

// Bundled fixtures: the 12-link example stream over {a, b, c, d} and seeded
// random streams / ledgers for tests and demos.

#include <cstdint>
#include <memory>

#include "lsledger/ingest.hpp"
#include "lsledger/stream.hpp"

namespace lsl::fixtures {

// Key table with a, b, c, d mapped to handles 0..3.
std::shared_ptr<const KeyTable> figure1_keys();
inline constexpr NodeId kA{0}, kB{1}, kC{2}, kD{3};

// T = [0, 6], V = {a, b, c, d}, 12 unweighted links.
LinkStream figure1_stream();

// Identities a..d; the 12 example links as certifications and again as
// member transactions (100 centimes each); three anonymous-wallet
// transactions involving w1 and w2.
LedgerRecords figure1_records();

struct RandomStreamParams {
  std::uint32_t nodes = 10;
  std::size_t links = 200;
  TimeInstant horizon = 50;
  bool weighted = false;
};

// Uniform random links (no self-links) with keys n0, n1, ...; every node is
// in the node set even when isolated.
LinkStream random_stream(std::uint64_t seed, const RandomStreamParams& params);

struct RandomLedgerParams {
  std::uint32_t members = 30;
  std::uint32_t anonymous = 10;
  std::size_t certifications = 150;
  std::size_t transactions = 300;
  TimeInstant start = 1'488'987'127;
  TimeInstant horizon = 90 * 86'400;
};

// Members are m0.., anonymous wallets a0..; certifications only between
// members.
LedgerRecords random_records(std::uint64_t seed, const RandomLedgerParams& params);

}  // namespace lsl::fixtures
