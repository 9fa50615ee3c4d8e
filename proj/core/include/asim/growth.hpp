// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "asim/network.hpp"
#include "asim/policy.hpp"
#include "asim/traffic.hpp"

namespace asim {

/// Adds one agent: the first at a population-weighted location, later ones at
/// a population-weighted occupied location, linked to a uniformly chosen
/// resident. The new agent's wickedness rate is drawn at birth.
AgentId add_new_agent(NetworkState& state);

/// Credits every agent base_income plus its share of
/// income_coeff * |agents| in proportion to `transit_volumes` (indexed by
/// agent id, normalized here to sum to one). Throws PreconditionError on
/// negative volumes or a size mismatch.
void accrue_income(NetworkState& state, std::span<const double> transit_volumes);

/// Deducts extent_upkeep * extent_cost per held location from every agent,
/// never taking money below zero.
void charge_upkeep(NetworkState& state);

/// One paid expansion to a population-weighted location the agent does not
/// hold yet. Returns false, without charge, when money is short or the agent
/// already covers every populated location.
bool try_expand(NetworkState& state, AgentId id);

/// Adds links until the mean degree reaches av_degree or the retry budget is
/// spent. Returns the number of links added.
std::size_t maintain_degree(NetworkState& state);

/// Advances one time step: arrival, income, expansion, degree maintenance,
/// clock, and every traffic_period steps a traffic run under `policy` whose
/// normalized transit volumes drive income until the next run. The traffic
/// tie seed is drawn from the state's RNG; `traffic.tie_seed` is ignored.
/// Returns the run when one happened.
struct TrafficRun {
  TrafficReport report;
  std::uint64_t tie_seed = 0;
};

std::optional<TrafficRun> growth_step(NetworkState& state,
                                      const PolicyAssignment& policy,
                                      const TrafficOptions& traffic = {});

/// Steps with no interventions until the network has `n_agents` agents.
void grow_to(NetworkState& state, std::size_t n_agents,
             const TrafficOptions& traffic = {});

}  // namespace asim
