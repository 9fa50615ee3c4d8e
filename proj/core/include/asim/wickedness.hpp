// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "asim/network.hpp"
#include "asim/rng.hpp"

namespace asim {

inline constexpr double kMaxWickednessRate = 0.5;

/// Inverse-CDF map of a uniform draw r in [0, 1) onto an exponential with
/// mean `avg`, clamped at 0.5.
double wickedness_from_uniform(double r, double avg);

/// One clamped-exponential draw.
double draw_wickedness(double avg, Rng& rng);

/// Re-draws every agent's rate independently, in id order.
void assign_wickedness(NetworkState& state, double avg, Rng& rng);

/// Infected-machine count: rate times served population.
double wickedness_level(const NetworkState& state, AgentId id);

}  // namespace asim
