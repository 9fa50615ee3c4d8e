// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "asim/experiment.hpp"
#include "asim/log.hpp"
#include "asim/snapshot.hpp"

namespace asim {
namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.grid.width = 12;
  c.grid.height = 12;
  c.grid.total_population = 50'000;
  c.n_agents = 250;
  c.seeds = {1, 2};
  c.workers = 1;
  return c;
}

const NetworkState& small_state() {
  static const NetworkState s = grow_network(small_config(), 3, 250);
  return s;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(ImpactCsv, HeaderAndRowShape) {
  ImpactRow r;
  r.scenario = "instant";
  r.seed = 7;
  r.n_agents = 10;
  r.policy.kind = PolicyKind::blacklist;
  r.policy.blacklist_threshold = 0.18;
  r.policy.size_cap = 170;
  r.strategy = "top_k";
  r.strategy_param = "20";
  r.baseline_wicked_rate = 0.125;
  r.treated_wicked_rate = 0.1;
  r.wicked_reduction_pct = 20.0;
  r.snapshot_id = "00ff";
  const auto out = lines(impact_csv(std::vector<ImpactRow>{r}));
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0],
            "scenario,seed,n_agents,policy_kind,e_in,e_out,theta,size_cap,strategy,"
            "strategy_param,baseline_wicked_rate,treated_wicked_rate,"
            "wicked_reduction_pct,good_loss_pct,scope,snapshot_id");
  EXPECT_EQ(out[1], "instant,7,10,blacklist,0.2,0.2,0.18,170,top_k,20,0.125,0.1,20,,all,00ff");
}

TEST(ImpactCsv, SummaryGroupsOverSeeds) {
  ImpactRow a;
  a.scenario = "instant";
  a.wicked_reduction_pct = 10.0;
  a.good_loss_pct = 0.0;
  ImpactRow b = a;
  b.seed = 2;
  b.wicked_reduction_pct = 14.0;
  std::ostringstream out;
  write_summary_csv(out, std::vector<ImpactRow>{a, b});
  const auto rows = lines(out.str());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NE(rows[1].find(",2,12,2.8284271247461903,0,0"), std::string::npos) << rows[1];
}

TEST(RunInstant, RowsPerSeedStrategyAndPolicy) {
  auto c = small_config();
  c.policy_kinds = {PolicyKind::egress, PolicyKind::ingress_all};
  c.strategies = {SelectionStrategy::top_k(10), SelectionStrategy::random_fraction(0.3)};
  const auto rows = run_instant(c, small_state(), "id");
  ASSERT_EQ(rows.size(), 2u * 2u * 2u * 3u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.snapshot_id, "id");
    EXPECT_EQ(r.n_agents, 250u);
    ASSERT_TRUE(r.wicked_reduction_pct.has_value());
    EXPECT_GT(*r.wicked_reduction_pct, 0.0);
    ASSERT_TRUE(r.good_loss_pct.has_value());
    EXPECT_NEAR(*r.good_loss_pct, 0.0, 1e-9);
  }
  // Paired: every row of one seed shares its baseline.
  EXPECT_EQ(rows[0].baseline_wicked_rate, rows[3].baseline_wicked_rate);
  EXPECT_EQ(rows[0].scope, "all");
  EXPECT_EQ(rows[1].scope, "interveners");
  EXPECT_EQ(rows[2].scope, "others");
}

TEST(RunParticipation, ZeroFractionIsZero) {
  auto c = small_config();
  c.seeds = {1};
  const auto rows = run_participation(c, small_state(), "id");
  ASSERT_EQ(rows.size(), c.fractions.size());
  EXPECT_EQ(rows.front().wicked_reduction_pct, 0.0);
  EXPECT_EQ(rows.front().strategy, "top_k_fraction");
  EXPECT_EQ(rows.front().strategy_param, "20/0");
  EXPECT_GT(*rows.back().wicked_reduction_pct, *rows[1].wicked_reduction_pct);
}

TEST(RunEfficacyGrid, ZeroCornerAndMonotone) {
  auto c = small_config();
  c.seeds = {1};
  c.efficacy_step = 0.1;
  const auto rows = run_efficacy_grid(c, small_state(), "id");
  ASSERT_EQ(rows.size(), 25u);
  EXPECT_EQ(rows[0].wicked_reduction_pct, 0.0);
  auto at = [&](int i, int o) { return *rows[static_cast<std::size_t>(i * 5 + o)].wicked_reduction_pct; };
  for (int i = 0; i < 5; ++i) {
    for (int o = 0; o < 5; ++o) {
      if (i > 0) EXPECT_GE(at(i, o), at(i - 1, o) - 1e-12);
      if (o > 0) EXPECT_GE(at(i, o), at(i, o - 1) - 1e-12);
    }
  }
}

TEST(RunThresholdCurve, GoodLossNonIncreasing) {
  auto c = small_config();
  c.seeds = {1};
  c.theta_step = 0.05;
  c.curve_size_cap = kUnlimitedSizeCap;
  const auto rows = run_threshold_curve(c, small_state(), "id");
  ASSERT_EQ(rows.size(), 10u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LE(*rows[i].good_loss_pct, *rows[i - 1].good_loss_pct + 1e-12);
    EXPECT_GT(rows[i].policy.blacklist_threshold, rows[i - 1].policy.blacklist_threshold);
  }
  EXPECT_EQ(rows.back().policy.blacklist_threshold, 0.5);
}

TEST(RunBlacklistTradeoff, HitsTargetsOrWarns) {
  auto c = small_config();
  c.seeds = {1};
  c.size_caps = {kUnlimitedSizeCap};
  c.loss_targets = {2.0, 5.0};
  c.theta_step = 0.1;
  std::vector<std::string> warnings;
  const auto previous = set_warning_sink([&](std::string_view m) { warnings.emplace_back(m); });
  const auto rows = run_blacklist_tradeoff(c, small_state(), "id");
  set_warning_sink(previous);
  ASSERT_EQ(rows.size(), 2u + 5u);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    hits += std::abs(*rows[i].good_loss_pct - c.loss_targets[i]) <= c.loss_tolerance_pp;
  }
  EXPECT_EQ(hits + warnings.size(), 2u);
  EXPECT_EQ(rows[2].scenario, "blacklist_threshold_curve");
}

TEST(RunEvolve, NoEffectivePolicyMeansNoLoss) {
  auto c = small_config();
  c.n_agents = 300;
  c.evolve_size_cap = 0;  // nobody is small enough to block
  const auto rows = run_evolve(c, small_state(), 1, "id");
  ASSERT_FALSE(rows.empty());
  for (const auto& r : rows) EXPECT_EQ(r.good_loss_pct, 0.0);
}

TEST(RunEvolve, SeedsAreReproducible) {
  auto c = small_config();
  c.n_agents = 300;
  c.evolve_theta = 0.1;
  const auto a = run_evolve(c, small_state(), 1, "id");
  const auto b = run_evolve(c, small_state(), 1, "id");
  const auto other = run_evolve(c, small_state(), 2, "id");
  EXPECT_EQ(a, b);
  EXPECT_NE(impact_csv(a), impact_csv(other));
  EXPECT_EQ(a.size(), 3u);  // traffic runs at n = 256, 272, 288
  for (const auto& r : a) {
    EXPECT_EQ(r.scenario, "evolve");
    EXPECT_EQ(r.policy.blacklist_threshold, 0.1);
    EXPECT_EQ(r.policy.size_cap, 170u);
    EXPECT_GT(*r.good_loss_pct, 0.0);
  }
}

TEST(RunEvolve, RecordEverySkipsRuns) {
  auto c = small_config();
  c.n_agents = 300;
  c.evolve_record_every = 2;
  const auto rows = run_evolve(c, small_state(), 1, "id");
  EXPECT_EQ(rows.size(), 2u);
}

TEST(Determinism, CsvIndependentOfWorkers) {
  auto c = small_config();
  c.policy_kinds = {PolicyKind::ingress_all, PolicyKind::blacklist};
  c.policy.blacklist_threshold = 0.1;
  c.strategies = {SelectionStrategy::top_k(10), SelectionStrategy::random_fraction(0.2)};
  const auto one = impact_csv(run_instant(c, small_state(), "id"));
  c.workers = 3;
  EXPECT_EQ(impact_csv(run_instant(c, small_state(), "id")), one);
}

TEST(GrowNetwork, SameSeedSameSnapshot) {
  auto c = small_config();
  const auto a = snapshot_text(grow_network(c, 9, 120));
  const auto b = snapshot_text(grow_network(c, 9, 120));
  EXPECT_EQ(a, b);
  EXPECT_EQ(grow_network(c, 9, 1).agent_count(), 1u);
}

TEST(RunMetrics, ReportsStructure) {
  const auto rows = run_metrics(small_config(), small_state());
  std::map<std::string, int> counts;
  for (const auto& r : rows) ++counts[r.metric];
  EXPECT_EQ(counts["n_agents"], 1);
  EXPECT_EQ(counts["connected"], 1);
  EXPECT_EQ(counts["wickedness_ccdf"], 51);
  EXPECT_GT(counts["path_length_ccdf"], 2);
  EXPECT_EQ(rows[0].value, 250.0);
  EXPECT_EQ(rows[3].value, 1.0);
}

}  // namespace
}  // namespace asim
