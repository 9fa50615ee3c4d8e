// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asim/network.hpp"
#include "asim/policy.hpp"
#include "asim/traffic.hpp"

namespace asim {

enum class Scenario {
  grow,
  instant,
  participation,
  efficacy_grid,
  blacklist_tradeoff,
  blacklist_threshold_curve,
  evolve,
  metrics,
};

std::string_view to_string(Scenario s);
/// Accepts the names above with '-' or '_'.
Scenario parse_scenario(std::string_view text);

struct GridConfig {
  std::size_t width = 32;
  std::size_t height = 32;
  std::uint64_t total_population = 1'000'000;
  std::uint64_t seed = 1;
};

struct ExperimentConfig {
  ModelParams model;
  GridConfig grid;
  Scenario scenario = Scenario::instant;

  /// Network size for grow, and the final size for evolve.
  std::size_t n_agents = 10'000;
  /// Size at which evolve switches its policy on.
  std::size_t evolve_start = 5'000;
  /// Record a paired baseline on every n-th traffic run of evolve.
  std::size_t evolve_record_every = 1;
  /// Blacklist applied by the top_k agents during evolve.
  double evolve_theta = 0.18;
  std::size_t evolve_size_cap = 170;

  /// Policy kinds compared by instant. The sweeps fix their own kind and
  /// take the remaining parameters from `policy`.
  std::vector<PolicyKind> policy_kinds{PolicyKind::egress};
  PolicySpec policy;  // kind ignored
  /// Strategies compared by instant; the sweeps and evolve use the top_k
  /// highest-degree agents.
  std::vector<SelectionStrategy> strategies{SelectionStrategy::top_k(20)};
  std::size_t top_k = 20;
  std::vector<std::uint64_t> seeds{1};

  /// Participation fractions and efficacy grid.
  std::vector<double> fractions{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  double efficacy_max = 0.4;
  double efficacy_step = 0.05;

  /// Blacklist tradeoff: good-loss targets (percent), caps, and the
  /// tolerance of the threshold search (percentage points).
  std::vector<double> loss_targets{2.0, 5.0, 10.0, 15.0};
  std::vector<std::size_t> size_caps{kUnlimitedSizeCap, 170, 10};
  double loss_tolerance_pp = 0.5;
  std::size_t search_iterations = 40;
  /// Threshold curve: thresholds theta_step, 2*theta_step, ... up to
  /// theta_max at cap curve_size_cap.
  double theta_step = 0.01;
  double theta_max = 0.5;
  std::size_t curve_size_cap = 170;

  /// Metrics: sampled path pairs (0 = all pairs) and wickedness bins.
  std::size_t path_pairs = 0;
  std::size_t wickedness_bins = 50;

  TransitFiltering transit_filtering = TransitFiltering::compounding;
  unsigned workers = 0;
  std::optional<std::filesystem::path> snapshot;
  std::optional<std::filesystem::path> out;

  /// Applies one key=value setting; throws ConfigError on an unknown key or
  /// a malformed value.
  void set(std::string_view key, std::string_view value);

  /// Checks cross-field consistency; throws ConfigError.
  void validate() const;

  /// `policy` once per entry of policy_kinds.
  std::vector<PolicySpec> policy_specs() const;
};

/// Parses flat key=value lines; '#' starts a comment, blank lines are
/// ignored. Later keys override earlier ones.
ExperimentConfig parse_config(std::istream& in,
                              ExperimentConfig base = ExperimentConfig{});
ExperimentConfig load_config(const std::filesystem::path& path,
                             ExperimentConfig base = ExperimentConfig{});

/// Splits "key=value"; throws ConfigError without '='.
std::pair<std::string, std::string> split_setting(std::string_view text);

}  // namespace asim
