#include <gtest/gtest.h>

#include "lsledger/error.hpp"
#include "lsledger/fixtures.hpp"
#include "lsledger/temporal.hpp"
#include "support/oracles.hpp"

namespace lsl {
namespace {

using fixtures::kA;
using fixtures::kB;
using fixtures::kC;
using fixtures::kD;

Link L(TimeInstant t, NodeId u, NodeId v) { return {t, u, v, std::nullopt}; }
LinkKey K(TimeInstant t, NodeId u, NodeId v) { return {t, u, v}; }

TEST(Neighborhood, Figure1NodeA) {
  const auto n = neighborhood(fixtures::figure1_stream(), kA);
  EXPECT_EQ(n.owner, kA);
  EXPECT_EQ(n.elements, (std::vector<TemporalNode>{{0, kD}, {1, kD}, {2, kB}, {5, kB}, {6, kB}, {6, kD}}));
  EXPECT_EQ(aggregated_neighborhood(fixtures::figure1_stream(), kA), (std::vector<NodeId>{kB, kD}));
}

TEST(Neighborhood, SizeBoundedByIncidentLinks) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto s = fixtures::random_stream(seed, {8, 60, 10, false});
    for (NodeId v : s.nodes()) {
      std::size_t incident = 0;
      for (const Link& l : s.links()) incident += (l.source == v || l.target == v);
      const auto n = neighborhood(s, v);
      EXPECT_LE(n.elements.size(), incident);
      EXPECT_LE(aggregated_neighborhood(s, v).size(), n.elements.size());
      for (auto [t, w] : n.elements) EXPECT_NE(w, v);
    }
  }
}

TEST(Neighborhood, UnknownNode) {
  EXPECT_THROW(neighborhood(fixtures::figure1_stream(), NodeId{42}), LookupError);
}

TEST(Overlap, SetExample) {
  const auto o = set_overlap({NodeId{1}, NodeId{2}, NodeId{3}}, {NodeId{2}, NodeId{3}, NodeId{4}, NodeId{5}});
  EXPECT_DOUBLE_EQ(*o.inclusion, 0.5);
  EXPECT_DOUBLE_EQ(*o.jaccard, 0.4);
}

TEST(Overlap, EmptySets) {
  const auto second_empty = set_overlap({NodeId{1}}, {});
  EXPECT_FALSE(second_empty.inclusion);
  EXPECT_DOUBLE_EQ(*second_empty.jaccard, 0.0);
  const auto both = set_overlap({}, {});
  EXPECT_FALSE(both.inclusion);
  EXPECT_FALSE(both.jaccard);
}

TEST(Overlap, AcrossStreams) {
  const auto s1 = fixtures::figure1_stream();
  const auto s2 = build_stream({L(1, kA, kB)}, {Interval{0, 6}, std::nullopt, fixtures::figure1_keys()});
  const auto o = neighborhood_overlap(kA, s1, s2);
  EXPECT_DOUBLE_EQ(*o.inclusion, 1.0);
  EXPECT_DOUBLE_EQ(*o.jaccard, 0.5);
  const auto missing = neighborhood_overlap(kC, s1, s2);
  EXPECT_FALSE(missing.inclusion);
  EXPECT_THROW(neighborhood_overlap(NodeId{9}, s1, s2), LookupError);
}

TEST(Overlap, IdenticalStreamsGiveOne) {
  const auto s = fixtures::random_stream(3, {8, 40, 10, false});
  for (NodeId v : s.nodes()) {
    const auto o = neighborhood_overlap(v, s, s);
    if (aggregated_neighborhood(s, v).empty()) continue;
    EXPECT_DOUBLE_EQ(*o.inclusion, 1.0);
    EXPECT_DOUBLE_EQ(*o.jaccard, 1.0);
  }
}

TEST(TwoClosure, Figure1Examples) {
  const auto s = fixtures::figure1_stream();
  EXPECT_EQ(two_closure(s, K(6, kA, kB)).lookback, 4);
  EXPECT_EQ(two_closure(s, K(5, kA, kB)).lookback, 3);
  EXPECT_EQ(two_closure(s, K(1, kD, kA)).lookback, 1);
  EXPECT_EQ(two_closure(s, K(5, kB, kC)).lookback, 1);
  EXPECT_EQ(two_closure(s, K(6, kD, kA)).lookback, 6);
  EXPECT_FALSE(two_closure(s, K(2, kB, kA)).lookback);
}

TEST(TwoClosure, SimultaneousReverseCloses) {
  const auto s = build_stream({L(3, kA, kB), L(3, kB, kA)});
  EXPECT_EQ(two_closure(s, K(3, kA, kB)).lookback, 0);
  EXPECT_EQ(two_closure(s, K(3, kB, kA)).lookback, 0);
}

TEST(ThreeClosure, Figure1Example) {
  const auto s = fixtures::figure1_stream();
  const auto r = three_closure(s, K(6, kA, kB));
  EXPECT_EQ(r.k, 3);
  EXPECT_EQ(r.lookback, 5);
}

TEST(ThreeClosure, CycleOrderMatters) {
  // u->v at 10, v->w at 4, w->u at 6: w->u is later than v->w, so no closure.
  const auto open = build_stream({L(4, kB, kC), L(6, kC, kA), L(10, kA, kB)});
  EXPECT_FALSE(three_closure(open, K(10, kA, kB)).lookback);
  const auto closed = build_stream({L(4, kC, kA), L(6, kB, kC), L(10, kA, kB)});
  EXPECT_EQ(three_closure(closed, K(10, kA, kB)).lookback, 6);
}

TEST(Closure, MissingLink) {
  const auto s = fixtures::figure1_stream();
  EXPECT_THROW(two_closure(s, K(3, kA, kB)), LookupError);
  EXPECT_THROW(three_closure(s, K(6, kB, kA)), LookupError);
  EXPECT_THROW(closure_distribution(s, 4), ParameterError);
}

class ClosureProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(ClosureProperties, MatchesOracle) {
  const auto s = fixtures::random_stream(GetParam(), {7, 80, 30, false});
  const auto d2 = closure_distribution(s, 2);
  const auto d3 = closure_distribution(s, 3);
  ASSERT_EQ(d2.results.size(), s.links().size());
  ASSERT_EQ(d3.results.size(), s.links().size());
  for (std::size_t i = 0; i < s.links().size(); ++i) {
    const Link& l = s.links()[i];
    EXPECT_EQ(d2.results[i].lookback, oracle::two_closure(s.links(), l)) << "link " << i;
    EXPECT_EQ(d3.results[i].lookback, oracle::three_closure(s.links(), l)) << "link " << i;
    if (d2.results[i].lookback) EXPECT_GE(*d2.results[i].lookback, 0);
    if (d3.results[i].lookback) EXPECT_GE(*d3.results[i].lookback, 0);
  }
  for (const auto* d : {&d2, &d3}) {
    std::size_t total = d->infinite;
    for (auto [lookback, count] : d->histogram) total += count;
    EXPECT_EQ(total, s.links().size());
  }
}

TEST_P(ClosureProperties, AddingLinksNeverIncreasesLookback) {
  const auto s = fixtures::random_stream(GetParam(), {6, 50, 25, false});
  auto extra = fixtures::random_stream(GetParam() + 1000, {6, 20, 25, false});
  std::vector<Link> merged(s.links().begin(), s.links().end());
  merged.insert(merged.end(), extra.links().begin(), extra.links().end());
  const auto bigger = build_stream(merged, {s.interval(), std::nullopt, s.keys()});
  const ClosureIndex small_index(s), big_index(bigger);
  for (const Link& l : s.links()) {
    const LinkKey key{l.t, l.source, l.target};
    for (int k : {2, 3}) {
      const auto before = k == 2 ? small_index.two_closure(key) : small_index.three_closure(key);
      const auto after = k == 2 ? big_index.two_closure(key) : big_index.three_closure(key);
      if (before) {
        ASSERT_TRUE(after);
        EXPECT_LE(*after, *before);
      }
    }
  }
}

TEST_P(ClosureProperties, InvariantUnderTimeShift) {
  const auto s = fixtures::random_stream(GetParam(), {6, 50, 25, false});
  std::vector<Link> shifted(s.links().begin(), s.links().end());
  for (Link& l : shifted) l.t += 1'000'000;
  const auto moved = build_stream(shifted, {std::nullopt, std::nullopt, s.keys()});
  for (int k : {2, 3}) {
    const auto a = closure_distribution(s, k);
    const auto b = closure_distribution(moved, k);
    EXPECT_EQ(a.histogram, b.histogram);
    EXPECT_EQ(a.infinite, b.infinite);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ClosureProperties, ::testing::Range<std::uint64_t>(1, 21));

}  // namespace
}  // namespace lsl
