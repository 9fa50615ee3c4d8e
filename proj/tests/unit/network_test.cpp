// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "asim/errors.hpp"
#include "asim/network.hpp"
#include "fixtures.hpp"

namespace asim {
namespace {

using testing::empty_state;

TEST(ServedPopulation, SoleOccupant) {
  auto s = empty_state({500});
  s.add_agent(0, 0.0);
  EXPECT_DOUBLE_EQ(served_population(s, 0), 500.0);
}

TEST(ServedPopulation, SharedCellSplitsEvenly) {
  auto s = empty_state({500});
  s.add_agent(0, 0.0);
  s.add_agent(0, 0.0);
  EXPECT_DOUBLE_EQ(served_population(s, 0), 250.0);
  EXPECT_DOUBLE_EQ(served_population(s, 1), 250.0);
}

TEST(ServedPopulation, SumsOverLocations) {
  // 300 shared by three plus 100 alone.
  auto s = empty_state({300, 100});
  const AgentId a = s.add_agent(0, 0.0);
  s.add_agent(0, 0.0);
  s.add_agent(0, 0.0);
  s.add_location(a, 1);
  EXPECT_DOUBLE_EQ(served_population(s, a), 200.0);
  EXPECT_THROW(served_population(s, 9), LookupError);
}

TEST(ServedPopulation, WholeCellWhenNotShared) {
  ModelParams p;
  p.shared_population = false;
  auto s = empty_state({300, 100}, p);
  const AgentId a = s.add_agent(0, 0.0);
  const AgentId b = s.add_agent(0, 0.0);
  s.add_location(a, 1);
  EXPECT_DOUBLE_EQ(served_population(s, a), 400.0);
  EXPECT_DOUBLE_EQ(served_population(s, b), 300.0);
  const auto pops = served_populations(s);
  EXPECT_DOUBLE_EQ(pops[a], 400.0);
  EXPECT_DOUBLE_EQ(pops[b], 300.0);
}

TEST(ServedPopulation, ConservesGridTotal) {
  auto s = testing::line3();
  const auto pops = served_populations(s);
  EXPECT_DOUBLE_EQ(pops[0] + pops[1] + pops[2], 300.0);
}

TEST(Degree, CountsLinks) {
  auto s = testing::star(2);
  EXPECT_EQ(degree(s, 0), 2u);
  EXPECT_EQ(degree(s, 1), 1u);
  auto lone = empty_state({10});
  lone.add_agent(0, 0.0);
  EXPECT_EQ(degree(lone, 0), 0u);
  EXPECT_THROW(degree(lone, 1), LookupError);
}

TEST(AddLink, SymmetricAndCounted) {
  auto s = empty_state({10});
  s.add_agent(0, 0.0);
  s.add_agent(0, 0.0);
  add_link(s, 0, 1);
  EXPECT_TRUE(s.agent(0).linked_to(1));
  EXPECT_TRUE(s.agent(1).linked_to(0));
  EXPECT_EQ(degree(s, 0), 1u);
  EXPECT_EQ(degree(s, 1), 1u);
  EXPECT_EQ(s.link_count(), 1u);
  EXPECT_DOUBLE_EQ(s.mean_degree(), 1.0);
}

TEST(AddLink, Errors) {
  auto s = empty_state({10, 10});
  s.add_agent(0, 0.0);
  s.add_agent(1, 0.0);
  s.add_agent(0, 0.0);
  EXPECT_THROW(add_link(s, 0, 1), StructuralError);  // no shared location
  EXPECT_THROW(add_link(s, 0, 0), StructuralError);
  add_link(s, 0, 2);
  EXPECT_THROW(add_link(s, 2, 0), PreconditionError);
  EXPECT_THROW(add_link(s, 0, 5), LookupError);
}

TEST(NetworkState, OccupancyTracksLocations) {
  auto s = testing::line3();
  ASSERT_EQ(s.occupants(1).size(), 2u);
  EXPECT_EQ(s.occupants(1)[0], 0u);
  EXPECT_EQ(s.occupants(1)[1], 1u);
  EXPECT_EQ(s.occupied_locations().size(), 4u);
  EXPECT_THROW(s.add_location(0, 1), StructuralError);
  EXPECT_NO_THROW(s.check_invariants());
}

TEST(NetworkState, InvariantsCatchDisconnection) {
  auto s = empty_state({10, 10});
  s.add_agent(0, 0.0);
  s.add_agent(1, 0.0);
  EXPECT_FALSE(is_connected(s));
  EXPECT_THROW(s.check_invariants(), StructuralError);
}

TEST(NetworkState, ValueRanges) {
  auto s = empty_state({10});
  s.add_agent(0, 0.0);
  EXPECT_THROW(s.set_wickedness_rate(0, 0.6), PreconditionError);
  EXPECT_THROW(s.set_money(0, -1.0), StructuralError);
  EXPECT_THROW(s.add_agent(0, -0.1), PreconditionError);
}

TEST(ModelParams, DefaultsAndValidation) {
  const ModelParams p;
  EXPECT_EQ(p.av_degree, 4.2);
  EXPECT_EQ(p.extent_cost, 1.5);
  EXPECT_EQ(p.base_income, 5.0);
  EXPECT_EQ(p.pop_distr_exp, -1.0);
  EXPECT_EQ(p.avg_wickedness, 0.1);
  EXPECT_EQ(p.traffic_period, 16u);
  EXPECT_NO_THROW(p.validate());
  ModelParams bad = p;
  bad.traffic_period = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
  bad = p;
  bad.avg_wickedness = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

}  // namespace
}  // namespace asim
