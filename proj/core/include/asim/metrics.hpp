// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "asim/network.hpp"
#include "asim/traffic.hpp"

namespace asim {

// One CCDF point: the fraction of samples whose value is >= x.
struct CcdfPoint {
  double x = 0.0;
  double fraction = 0.0;
  bool operator==(const CcdfPoint&) const = default;
};

using Ccdf = std::vector<CcdfPoint>;

struct DegreeStats {
  double mean = 0.0;
  Ccdf ccdf;  // one point per degree 0..max
};

DegreeStats degree_stats(const NetworkState& state);

/// CCDF of hop distances, one point per length 1..max. With sample_pairs = 0
/// every unordered pair is counted once; otherwise that many ordered pairs of
/// distinct agents are drawn with replacement.
Ccdf path_length_ccdf(const NetworkState& state, std::size_t sample_pairs,
                      std::uint64_t seed);

/// CCDF of wickedness levels divided by the largest level, evaluated at
/// `bins` + 1 evenly spaced points on [0, 1]. All-zero levels put the whole
/// mass at 0.
Ccdf wickedness_ccdf(const NetworkState& state, std::size_t bins);

/// Largest vertical gap between two CCDFs over the union of their points,
/// each read as a right-continuous step function.
double ks_distance(const Ccdf& a, const Ccdf& b);

struct Impact {
  std::optional<double> wicked_reduction_pct;  // absent for a zero baseline
  std::optional<double> good_loss_pct;         // absent when nothing good flowed
};

Impact impact(const TrafficReport& baseline, const TrafficReport& treated);

/// Same measure restricted to the traffic delivered to `group`.
Impact impact(const TrafficReport& baseline, const TrafficReport& treated,
              std::span<const AgentId> group);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 below two values
  std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

}  // namespace asim
