#include "lsledger/fixtures.hpp"

#include <random>
#include <string>

namespace lsl::fixtures {

namespace {

struct Triple {
  TimeInstant t;
  char u;
  char v;
};

constexpr Triple kFigure1[] = {
    {0, 'c', 'b'}, {0, 'a', 'd'}, {1, 'd', 'a'}, {2, 'b', 'a'}, {2, 'c', 'd'}, {4, 'c', 'b'},
    {4, 'b', 'd'}, {5, 'a', 'b'}, {5, 'b', 'c'}, {5, 'd', 'c'}, {6, 'a', 'b'}, {6, 'd', 'a'},
};

NodeId letter(char c) { return NodeId{static_cast<std::uint32_t>(c - 'a')}; }

}  // namespace

std::shared_ptr<const KeyTable> figure1_keys() {
  auto keys = std::make_shared<KeyTable>();
  for (const char* k : {"a", "b", "c", "d"}) keys->intern(k);
  return keys;
}

LinkStream figure1_stream() {
  std::vector<Link> links;
  for (const auto& [t, u, v] : kFigure1) links.push_back({t, letter(u), letter(v), std::nullopt});
  return build_stream(std::move(links), {Interval{0, 6}, std::nullopt, figure1_keys()});
}

LedgerRecords figure1_records() {
  LedgerRecords r;
  for (const char* k : {"a", "b", "c", "d"}) r.identities.push_back({0, k, std::string("user_") + k});
  for (const auto& [t, u, v] : kFigure1) {
    r.certifications.push_back({t, std::string(1, u), std::string(1, v)});
    r.transactions.push_back({t, std::string(1, u), std::string(1, v), 100});
  }
  r.transactions.push_back({3, "w1", "a", 50});
  r.transactions.push_back({4, "b", "w2", 20});
  r.transactions.push_back({6, "w1", "w2", 10});
  return r;
}

LinkStream random_stream(std::uint64_t seed, const RandomStreamParams& params) {
  std::mt19937_64 rng(seed);
  auto keys = std::make_shared<KeyTable>();
  std::vector<NodeId> nodes;
  for (std::uint32_t i = 0; i < params.nodes; ++i) nodes.push_back(keys->intern("n" + std::to_string(i)));

  std::uniform_int_distribution<std::uint32_t> node(0, params.nodes - 1);
  std::uniform_int_distribution<TimeInstant> time(0, params.horizon);
  std::uniform_int_distribution<Amount> amount(1, 10'000);
  std::vector<Link> links;
  if (params.nodes >= 2) {
    while (links.size() < params.links) {
      const auto u = node(rng);
      const auto v = node(rng);
      if (u == v) continue;
      Link l{time(rng), NodeId{u}, NodeId{v}, std::nullopt};
      if (params.weighted) l.amount = amount(rng);
      links.push_back(l);
    }
  }
  return build_stream(std::move(links), {Interval{0, params.horizon}, std::move(nodes), std::move(keys)});
}

LedgerRecords random_records(std::uint64_t seed, const RandomLedgerParams& params) {
  std::mt19937_64 rng(seed);
  LedgerRecords r;
  std::vector<std::string> members, anonymous, everyone;
  for (std::uint32_t i = 0; i < params.members; ++i) members.push_back("m" + std::to_string(i));
  for (std::uint32_t i = 0; i < params.anonymous; ++i) anonymous.push_back("a" + std::to_string(i));
  everyone = members;
  everyone.insert(everyone.end(), anonymous.begin(), anonymous.end());

  std::uniform_int_distribution<TimeInstant> time(params.start, params.start + params.horizon);
  for (const auto& m : members) r.identities.push_back({params.start, m, "uid_" + m});

  if (members.size() >= 2) {
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    while (r.certifications.size() < params.certifications) {
      const auto u = pick(rng);
      const auto v = pick(rng);
      if (u != v) r.certifications.push_back({time(rng), members[u], members[v]});
    }
  }
  if (everyone.size() >= 2) {
    std::uniform_int_distribution<std::size_t> pick(0, everyone.size() - 1);
    std::uniform_int_distribution<Amount> amount(1, 100'000);
    while (r.transactions.size() < params.transactions) {
      const auto u = pick(rng);
      const auto v = pick(rng);
      if (u != v) r.transactions.push_back({time(rng), everyone[u], everyone[v], amount(rng)});
    }
  }
  return r;
}

}  // namespace lsl::fixtures
