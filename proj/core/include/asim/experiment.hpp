// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "asim/config.hpp"
#include "asim/metrics.hpp"
#include "asim/network.hpp"

namespace asim {

/// One paired measurement: the same snapshot and tie seed with and without
/// an intervention.
struct ImpactRow {
  std::string scenario;
  std::uint64_t seed = 0;
  std::size_t n_agents = 0;
  PolicySpec policy;
  std::string strategy;
  std::string strategy_param;
  double baseline_wicked_rate = 0.0;
  double treated_wicked_rate = 0.0;
  std::optional<double> wicked_reduction_pct;
  std::optional<double> good_loss_pct;
  /// Which destinations the rates cover: "all", "interveners" or "others".
  std::string scope = "all";
  std::string snapshot_id;

  friend bool operator==(const ImpactRow&, const ImpactRow&) = default;
};

void write_impact_csv(std::ostream& out, std::span<const ImpactRow> rows);
std::string impact_csv(std::span<const ImpactRow> rows);

/// Mean and sample standard deviation over seeds of every row group that
/// differs only in its seed.
void write_summary_csv(std::ostream& out, std::span<const ImpactRow> rows);

struct MetricRow {
  std::string metric;
  double x = 0.0;
  double value = 0.0;
};

void write_metric_csv(std::ostream& out, std::span<const MetricRow> rows,
                      const std::string& snapshot_id);

/// Receives one human-readable line per finished unit of work.
using Progress = std::function<void(const std::string&)>;

/// Per-seed streams for intervener selection and path tie-breaking.
std::uint64_t selection_seed(std::uint64_t seed);
std::uint64_t tie_seed_for(std::uint64_t seed);

/// Builds the configured grid and grows a fresh network to `n_agents`.
NetworkState grow_network(const ExperimentConfig& config, std::uint64_t seed,
                          std::size_t n_agents, const Progress& progress = {});

std::vector<ImpactRow> run_instant(const ExperimentConfig& config,
                                   const NetworkState& state,
                                   const std::string& snapshot_id,
                                   const Progress& progress = {});

std::vector<ImpactRow> run_participation(const ExperimentConfig& config,
                                         const NetworkState& state,
                                         const std::string& snapshot_id,
                                         const Progress& progress = {});

std::vector<ImpactRow> run_efficacy_grid(const ExperimentConfig& config,
                                         const NetworkState& state,
                                         const std::string& snapshot_id,
                                         const Progress& progress = {});

/// For each size cap and good-loss target, bisects the blacklist threshold
/// until the loss is within tolerance of the target, then appends the dense
/// threshold curve.
std::vector<ImpactRow> run_blacklist_tradeoff(const ExperimentConfig& config,
                                              const NetworkState& state,
                                              const std::string& snapshot_id,
                                              const Progress& progress = {});

std::vector<ImpactRow> run_threshold_curve(const ExperimentConfig& config,
                                           const NetworkState& state,
                                           const std::string& snapshot_id,
                                           const Progress& progress = {});

/// Continues growth from `start` to config.n_agents with the top_k agents
/// blacklisting at config.evolve_theta and evolve_size_cap, refreshing the top_k at
/// every traffic run. Each recorded run is paired with a no-policy run on the
/// same state and tie seed. The state's RNG is reseeded from `seed` first, so
/// different seeds give different continuations of one snapshot.
std::vector<ImpactRow> run_evolve(const ExperimentConfig& config,
                                  NetworkState start, std::uint64_t seed,
                                  const std::string& snapshot_id,
                                  const Progress& progress = {});

std::vector<MetricRow> run_metrics(const ExperimentConfig& config,
                                   const NetworkState& state);

}  // namespace asim
