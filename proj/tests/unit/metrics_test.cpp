// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "asim/errors.hpp"
#include "asim/growth.hpp"
#include "asim/metrics.hpp"
#include "asim/traffic.hpp"
#include "asim/wickedness.hpp"
#include "fixtures.hpp"

namespace asim {
namespace {

void expect_valid_ccdf(const Ccdf& c) {
  ASSERT_FALSE(c.empty());
  EXPECT_EQ(c.front().fraction, 1.0);
  for (std::size_t i = 1; i < c.size(); ++i) {
    EXPECT_LT(c[i - 1].x, c[i].x);
    EXPECT_LE(c[i].fraction, c[i - 1].fraction);
    EXPECT_GE(c[i].fraction, 0.0);
  }
}

const NetworkState& grown500() {
  static const NetworkState s = [] {
    NetworkState g(build_grid(16, 16, -1.0, 100'000, 6), ModelParams{}, 6);
    grow_to(g, 500);
    return g;
  }();
  return s;
}

TEST(DegreeStats, Pair) {
  const auto s = testing::star(1);
  const auto d = degree_stats(s);
  EXPECT_EQ(d.mean, 1.0);
  EXPECT_EQ(d.ccdf, (Ccdf{{0, 1.0}, {1, 1.0}}));
}

TEST(DegreeStats, Star) {
  const auto d = degree_stats(testing::star(5));
  EXPECT_NEAR(d.mean, 10.0 / 6.0, 1e-15);
  ASSERT_EQ(d.ccdf.size(), 6u);
  EXPECT_NEAR(d.ccdf[1].fraction, 1.0, 1e-15);
  EXPECT_NEAR(d.ccdf[2].fraction, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(d.ccdf[5].fraction, 1.0 / 6.0, 1e-15);
  EXPECT_THROW(degree_stats(testing::empty_state({1})), PreconditionError);
}

TEST(DegreeStats, GrownNetworkIsValid) {
  const auto d = degree_stats(grown500());
  expect_valid_ccdf(d.ccdf);
  EXPECT_GE(d.mean, 4.2);
}

TEST(PathLengthCcdf, Triangle) {
  auto s = testing::empty_state({30});
  for (int i = 0; i < 3; ++i) s.add_agent(0, 0.0);
  s.add_link(0, 1);
  s.add_link(1, 2);
  s.add_link(0, 2);
  EXPECT_EQ(path_length_ccdf(s, 0, 1), (Ccdf{{1, 1.0}}));
}

TEST(PathLengthCcdf, LineOfThree) {
  const auto c = path_length_ccdf(testing::line3(), 0, 1);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0], (CcdfPoint{1, 1.0}));
  EXPECT_EQ(c[1].x, 2.0);
  EXPECT_NEAR(c[1].fraction, 1.0 / 3.0, 1e-15);
}

TEST(PathLengthCcdf, SampledApproachesExact) {
  const auto& s = grown500();
  const auto exact = path_length_ccdf(s, 0, 0);
  const auto sampled = path_length_ccdf(s, 20'000, 3);
  expect_valid_ccdf(exact);
  expect_valid_ccdf(sampled);
  EXPECT_LT(ks_distance(exact, sampled), 0.02);
  EXPECT_EQ(sampled, path_length_ccdf(s, 20'000, 3));
}

TEST(PathLengthCcdf, NeedsConnectedNetwork) {
  auto s = testing::empty_state({1, 1});
  s.add_agent(0, 0.0);
  s.add_agent(1, 0.0);
  EXPECT_THROW(path_length_ccdf(s, 0, 1), PreconditionError);
}

TEST(WickednessCcdf, AllZeroMassAtZero) {
  EXPECT_EQ(wickedness_ccdf(testing::star(3), 10), (Ccdf{{0.0, 1.0}}));
}

TEST(WickednessCcdf, SingleAgentIsAStep) {
  auto s = testing::empty_state({100});
  s.add_agent(0, 0.2);
  const auto c = wickedness_ccdf(s, 4);
  ASSERT_EQ(c.size(), 5u);
  for (const auto& p : c) EXPECT_EQ(p.fraction, 1.0);
  EXPECT_EQ(c.back().x, 1.0);
}

TEST(WickednessCcdf, NormalizedByLargestLevel) {
  auto s = testing::empty_state({100, 100});
  s.add_agent(0, 0.1);  // level 10
  s.add_agent(1, 0.4);  // level 40
  const auto c = wickedness_ccdf(s, 4);
  EXPECT_EQ(c[1], (CcdfPoint{0.25, 1.0}));
  EXPECT_EQ(c[2], (CcdfPoint{0.5, 0.5}));
  EXPECT_EQ(c[4], (CcdfPoint{1.0, 0.5}));
}

TEST(WickednessCcdf, GrownNetworkMeanRate) {
  NetworkState s(build_grid(32, 32, -1.0, 1'000'000, 2), ModelParams{}, 2);
  for (int i = 0; i < 10'000; ++i) add_new_agent(s);
  double sum = 0.0;
  for (const Agent& a : s.agents()) sum += a.wickedness_rate;
  EXPECT_NEAR(sum / 10'000.0, 0.1 * (1.0 - std::exp(-5.0)), 0.003);
  expect_valid_ccdf(wickedness_ccdf(s, 50));
}

TEST(KsDistance, StepFunctions) {
  const Ccdf a{{1, 1.0}, {2, 0.5}, {3, 0.1}};
  const Ccdf b{{1, 1.0}, {2, 0.6}};
  EXPECT_DOUBLE_EQ(ks_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(ks_distance(a, b), 0.1);  // x = 2: 0.5 vs 0.6, x = 3: 0.1 vs 0
  EXPECT_DOUBLE_EQ(ks_distance(a, b), ks_distance(b, a));
  const Ccdf shifted{{2, 1.0}, {3, 0.5}};
  EXPECT_DOUBLE_EQ(ks_distance(Ccdf{{1, 1.0}, {2, 0.5}}, shifted), 0.5);
}

TEST(Impact, IdentityIsZero) {
  const auto r = compute_traffic(testing::line3(), PolicyAssignment{}, {});
  const auto i = impact(r, r);
  EXPECT_EQ(i.wicked_reduction_pct, 0.0);
  EXPECT_EQ(i.good_loss_pct, 0.0);
}

TEST(Impact, UniversalFullEgress) {
  const auto& s = grown500();
  std::vector<AgentId> all(s.agent_count());
  for (AgentId a = 0; a < all.size(); ++a) all[a] = a;
  PolicySpec e;
  e.kind = PolicyKind::egress;
  e.e_out = 1.0;
  const auto base = compute_traffic(s, PolicyAssignment{}, {.tie_seed = 1});
  const auto treated = compute_traffic(s, make_assignment(all, e), {.tie_seed = 1});
  const auto i = impact(base, treated);
  ASSERT_TRUE(i.wicked_reduction_pct && i.good_loss_pct);
  EXPECT_NEAR(*i.wicked_reduction_pct, 100.0, 1e-9);
  EXPECT_NEAR(*i.good_loss_pct, 0.0, 1e-9);
}

TEST(Impact, LineEgressExample) {
  const auto s = testing::line3();
  PolicyAssignment p;
  PolicySpec e;
  e.kind = PolicyKind::egress;
  p.set(0, e);
  const auto base = compute_traffic(s, PolicyAssignment{}, {});
  const auto treated = compute_traffic(s, p, {});
  const auto i = impact(base, treated);
  const double expected = 100.0 * (6250.0 / 45000.0 - 5000.0 / 43750.0) / (6250.0 / 45000.0);
  ASSERT_TRUE(i.wicked_reduction_pct.has_value());
  EXPECT_NEAR(*i.wicked_reduction_pct, expected, 1e-12);
  EXPECT_NEAR(*i.wicked_reduction_pct, 17.71, 0.01);
}

TEST(Impact, AbsentForZeroBaseline) {
  const auto r = compute_traffic(testing::line3(0, 0, 0), PolicyAssignment{}, {});
  const auto i = impact(r, r);
  EXPECT_FALSE(i.wicked_reduction_pct.has_value());
  EXPECT_EQ(i.good_loss_pct, 0.0);
}

TEST(Impact, GoodLossSignFlipsWhenSwapped) {
  const auto s = testing::line3();
  PolicyAssignment p;
  PolicySpec bl;
  bl.kind = PolicyKind::blacklist;
  bl.blacklist_threshold = 0.3;
  p.set(1, bl);
  const auto base = compute_traffic(s, PolicyAssignment{}, {});
  const auto treated = compute_traffic(s, p, {});
  const auto fwd = impact(base, treated);
  const auto back = impact(treated, base);
  EXPECT_NEAR(*fwd.good_loss_pct, 100.0 * 6250.0 / 38750.0, 1e-12);
  EXPECT_GT(*fwd.good_loss_pct, 0.0);
  EXPECT_LT(*back.good_loss_pct, 0.0);
}

TEST(Impact, GroupScope) {
  const auto s = testing::line3();
  PolicyAssignment p;
  PolicySpec in;
  in.kind = PolicyKind::ingress_user;
  p.set(2, in);
  const auto base = compute_traffic(s, PolicyAssignment{}, {});
  const auto treated = compute_traffic(s, p, {});
  const std::vector<AgentId> c{2}, b{1};
  EXPECT_NEAR(*impact(base, treated, c).wicked_reduction_pct, 100.0 * (1.0 - 10000.0 / 12250.0), 1e-9);
  EXPECT_EQ(*impact(base, treated, b).wicked_reduction_pct, 0.0);
  const std::vector<AgentId> bad{9};
  EXPECT_THROW(impact(base, treated, bad), LookupError);
}

TEST(Summarize, MeanAndSampleDeviation) {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  const auto s = summarize(v);
  EXPECT_EQ(s.count, 8u);
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_NEAR(s.stddev, std::sqrt(32.0 / 7.0), 1e-15);
  EXPECT_EQ(summarize(std::vector<double>{3}).stddev, 0.0);
  EXPECT_EQ(summarize({}).count, 0u);
}

}  // namespace
}  // namespace asim
