// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "asim/errors.hpp"
#include "asim/growth.hpp"
#include "fixtures.hpp"

namespace asim {
namespace {

using testing::empty_state;

NetworkState fresh(std::uint64_t seed = 1, ModelParams p = {}) {
  return NetworkState(build_grid(16, 16, -1.0, 100'000, seed), p, seed);
}

TEST(GrowthStep, BootstrapsFirstAgent) {
  auto s = fresh();
  growth_step(s, PolicyAssignment{});
  EXPECT_EQ(s.agent_count(), 1u);
  EXPECT_EQ(s.link_count(), 0u);
  EXPECT_EQ(s.step(), 1u);
}

TEST(GrowthStep, SecondAgentLinksToFirst) {
  auto s = fresh();
  growth_step(s, PolicyAssignment{});
  growth_step(s, PolicyAssignment{});
  EXPECT_EQ(s.agent_count(), 2u);
  EXPECT_GE(s.link_count(), 1u);
  EXPECT_TRUE(is_connected(s));
}

TEST(GrowthStep, TrafficRunsEveryPeriod) {
  auto s = fresh();
  for (int i = 1; i <= 40; ++i) {
    const auto run = growth_step(s, PolicyAssignment{});
    EXPECT_EQ(run.has_value(), i % 16 == 0) << i;
    if (run) {
      double share = 0.0;
      for (const Agent& a : s.agents()) share += a.transit_share;
      EXPECT_NEAR(share, 1.0, 1e-12);
    }
  }
}

TEST(GrowthStep, InvariantsHoldEveryStep) {
  auto s = fresh(3);
  for (std::size_t n = 1; n <= 400; ++n) {
    const auto before = s.agent_count();
    growth_step(s, PolicyAssignment{});
    ASSERT_EQ(s.agent_count(), before + 1);
    ASSERT_NO_THROW(s.check_invariants());
    if (n >= 6) {
      ASSERT_GE(s.mean_degree(), 4.2);
      ASSERT_LE(s.mean_degree(), 4.2 + 2.0 / static_cast<double>(n));
    }
  }
}

TEST(GrowthStep, DeterministicGivenSeed) {
  auto a = fresh(8), b = fresh(8), c = fresh(9);
  grow_to(a, 150);
  grow_to(b, 150);
  grow_to(c, 150);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(GrowthStep, WorkerCountDoesNotChangeGrowth) {
  auto a = fresh(4), b = fresh(4);
  TrafficOptions one, three;
  one.workers = 1;
  three.workers = 3;
  grow_to(a, 200, one);
  grow_to(b, 200, three);
  EXPECT_EQ(a, b);
}

TEST(AccrueIncome, BaseIncomeBeforeAnyTraffic) {
  auto s = testing::star(3);
  accrue_income(s, std::vector<double>(4, 0.0));
  for (const Agent& a : s.agents()) EXPECT_DOUBLE_EQ(a.money, 5.0);
}

TEST(AccrueIncome, ProportionalToNormalizedVolume) {
  // income_coeff scales with the agent count: 0.5 per agent over two agents
  // is a total coefficient of 1.
  ModelParams p;
  p.income_coeff = 0.5;
  auto s = empty_state({10}, p);
  s.add_agent(0, 0.0);
  s.add_agent(0, 0.0);
  accrue_income(s, std::vector<double>{3.0, 3.0});
  EXPECT_DOUBLE_EQ(s.agent(0).money, 5.5);
  EXPECT_DOUBLE_EQ(s.agent(1).money, 5.5);
  accrue_income(s, std::vector<double>{7.0, 0.0});
  EXPECT_DOUBLE_EQ(s.agent(0).money, 11.5);
  EXPECT_DOUBLE_EQ(s.agent(1).money, 10.5);
}

TEST(AccrueIncome, RejectsBadVolumes) {
  auto s = testing::star(1);
  EXPECT_THROW(accrue_income(s, std::vector<double>{1.0, -1.0}), PreconditionError);
  EXPECT_THROW(accrue_income(s, std::vector<double>{1.0}), PreconditionError);
}

TEST(ChargeUpkeep, PerLocationAndFloorAtZero) {
  ModelParams p;
  p.extent_upkeep = 2.0;
  auto s = empty_state({10, 10}, p);
  s.add_agent(0, 0.0);
  s.add_location(0, 1);
  s.add_agent(1, 0.0);
  s.set_money(0, 10.0);
  s.set_money(1, 1.0);
  charge_upkeep(s);
  EXPECT_DOUBLE_EQ(s.agent(0).money, 4.0);  // 10 - 2 * 1.5 * 2
  EXPECT_DOUBLE_EQ(s.agent(1).money, 0.0);
}

TEST(TryExpand, NeedsExtentCost) {
  auto s = empty_state({10, 20, 30});
  s.add_agent(0, 0.0);
  s.set_money(0, 1.0);
  EXPECT_FALSE(try_expand(s, 0));
  EXPECT_EQ(s.agent(0).money, 1.0);
  EXPECT_EQ(s.agent(0).locations.size(), 1u);
  s.set_money(0, 2.0);
  EXPECT_TRUE(try_expand(s, 0));
  EXPECT_DOUBLE_EQ(s.agent(0).money, 0.5);
  EXPECT_EQ(s.agent(0).locations.size(), 2u);
}

TEST(TryExpand, SaturatedAgentIsNotCharged) {
  auto s = empty_state({10, 0, 30});
  s.add_agent(0, 0.0);
  s.add_location(0, 2);
  s.set_money(0, 100.0);
  EXPECT_FALSE(try_expand(s, 0));
  EXPECT_EQ(s.agent(0).money, 100.0);
}

TEST(TryExpand, NeverPicksHeldOrEmptyCells) {
  auto s = empty_state({1000, 0, 1, 1});
  s.add_agent(0, 0.0);
  s.set_money(0, 3.0);
  EXPECT_TRUE(try_expand(s, 0));
  EXPECT_TRUE(try_expand(s, 0));
  EXPECT_EQ(s.agent(0).locations, (std::vector<LocationId>{0, 2, 3}));
}

TEST(MaintainDegree, NothingToDoAtTarget) {
  ModelParams p;
  p.av_degree = 1.0;
  auto s = empty_state({10}, p);
  s.add_agent(0, 0.0);
  s.add_agent(0, 0.0);
  s.add_link(0, 1);
  const auto rng = s.rng();
  EXPECT_EQ(maintain_degree(s), 0u);
  EXPECT_EQ(s.rng(), rng);
}

TEST(MaintainDegree, TwoAgentsOneLink) {
  ModelParams p;
  p.av_degree = 1.0;
  auto s = empty_state({10}, p);
  s.add_agent(0, 0.0);
  s.add_agent(0, 0.0);
  EXPECT_EQ(maintain_degree(s), 1u);
  EXPECT_EQ(s.link_count(), 1u);
  EXPECT_DOUBLE_EQ(s.mean_degree(), 1.0);
}

TEST(MaintainDegree, ForcedExpansionIsFree) {
  ModelParams p;
  p.av_degree = 2.0;
  auto s = empty_state({10, 10, 10}, p, 4);
  s.add_agent(0, 0.0);
  s.add_agent(1, 0.0);
  s.add_agent(2, 0.0);
  const auto added = maintain_degree(s);
  EXPECT_EQ(added, 3u);
  for (const Agent& a : s.agents()) {
    EXPECT_EQ(a.money, 0.0);
    EXPECT_EQ(a.links.size(), 2u);
  }
}

TEST(MaintainDegree, CompleteGraphStops) {
  ModelParams p;
  p.av_degree = 10.0;
  auto s = empty_state({10}, p);
  for (int i = 0; i < 3; ++i) s.add_agent(0, 0.0);
  EXPECT_EQ(maintain_degree(s), 3u);
  EXPECT_EQ(s.link_count(), 3u);
}

}  // namespace
}  // namespace asim
