// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "asim/wickedness.hpp"

#include <algorithm>
#include <cmath>

#include "asim/errors.hpp"

namespace asim {

double wickedness_from_uniform(double r, double avg) {
  return std::min(-avg * std::log1p(-r), kMaxWickednessRate);
}

double draw_wickedness(double avg, Rng& rng) {
  if (!(avg > 0.0)) throw PreconditionError("average wickedness must be > 0");
  return wickedness_from_uniform(rng.uniform01(), avg);
}

void assign_wickedness(NetworkState& state, double avg, Rng& rng) {
  for (AgentId id = 0; id < state.agent_count(); ++id) {
    state.set_wickedness_rate(id, draw_wickedness(avg, rng));
  }
}

double wickedness_level(const NetworkState& state, AgentId id) {
  return state.agent(id).wickedness_rate * served_population(state, id);
}

}  // namespace asim
