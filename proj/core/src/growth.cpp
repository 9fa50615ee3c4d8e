// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "asim/growth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "asim/errors.hpp"
#include "asim/log.hpp"
#include "asim/wickedness.hpp"

namespace asim {

namespace {

constexpr int kRejectionTries = 32;

// Population-weighted occupied location.
LocationId sample_occupied(NetworkState& state) {
  const auto& grid = state.grid();
  const auto occupied = state.occupied_locations();
  if (occupied.size() == grid.populated_count()) {
    return sample_location(grid, state.rng());
  }
  return sample_location(grid, occupied, state.rng());
}

// Population-weighted location not yet held by `a`.
LocationId sample_unheld(NetworkState& state, const Agent& a) {
  const auto& grid = state.grid();
  for (int i = 0; i < kRejectionTries; ++i) {
    const LocationId loc = sample_location(grid, state.rng());
    if (!a.holds(loc)) return loc;
  }
  std::vector<LocationId> free;
  free.reserve(grid.size() - a.locations.size());
  for (LocationId loc = 0; loc < grid.size(); ++loc) {
    if (grid.population(loc) > 0 && !a.holds(loc)) free.push_back(loc);
  }
  return sample_location(grid, free, state.rng());
}

}  // namespace

AgentId add_new_agent(NetworkState& state) {
  if (state.agent_count() == 0) {
    const LocationId loc = sample_location(state.grid(), state.rng());
    const double rate =
        draw_wickedness(state.params().avg_wickedness, state.rng());
    return state.add_agent(loc, rate);
  }
  const LocationId loc = sample_occupied(state);
  const auto residents = state.occupants(loc);
  const AgentId peer = residents[state.rng().uniform_below(residents.size())];
  const double rate = draw_wickedness(state.params().avg_wickedness, state.rng());
  const AgentId id = state.add_agent(loc, rate);
  state.add_link(id, peer);
  return id;
}

void accrue_income(NetworkState& state, std::span<const double> transit_volumes) {
  const std::size_t n = state.agent_count();
  if (transit_volumes.size() != n) {
    throw PreconditionError("transit volume count does not match agent count");
  }
  double total = 0.0;
  for (double v : transit_volumes) {
    if (!(v >= 0.0)) throw PreconditionError("negative transit volume");
    total += v;
  }
  const ModelParams& p = state.params();
  const double kappa = p.income_coeff * static_cast<double>(n);
  for (AgentId id = 0; id < n; ++id) {
    const double traffic =
        total > 0.0 ? kappa * transit_volumes[id] / total : 0.0;
    state.set_money(id, state.agent(id).money + p.base_income + traffic);
  }
}

void charge_upkeep(NetworkState& state) {
  const double per_location =
      state.params().extent_upkeep * state.params().extent_cost;
  if (per_location <= 0.0) return;
  for (const Agent& a : state.agents()) {
    const double due = per_location * static_cast<double>(a.locations.size());
    state.set_money(a.id, std::max(0.0, a.money - due));
  }
}

bool try_expand(NetworkState& state, AgentId id) {
  const Agent& a = state.agent(id);
  const double cost = state.params().extent_cost;
  if (a.locations.size() >= state.grid().populated_count()) return false;
  if (a.money < cost) return false;
  const LocationId loc = sample_unheld(state, a);
  state.set_money(id, a.money - cost);
  state.add_location(id, loc);
  return true;
}

std::size_t maintain_degree(NetworkState& state) {
  const std::size_t n = state.agent_count();
  if (n < 2) return 0;
  const double target = state.params().av_degree;
  if (state.mean_degree() >= target) return 0;

  const auto needed = static_cast<std::size_t>(
      std::ceil(target * static_cast<double>(n) / 2.0)) - state.link_count();
  const auto budget = static_cast<std::size_t>(
      std::ceil(state.params().link_retry_factor *
                static_cast<double>(std::max<std::size_t>(needed, 1))));
  std::size_t added = 0;
  const std::size_t complete = n * (n - 1) / 2;
  for (std::size_t attempt = 0; attempt < budget &&
                                state.mean_degree() < target &&
                                state.link_count() < complete;
       ++attempt) {
    const auto src = static_cast<AgentId>(state.rng().uniform_below(n));
    const LocationId loc = sample_occupied(state);
    const auto residents = state.occupants(loc);
    const AgentId dst = residents[state.rng().uniform_below(residents.size())];
    if (src == dst || state.agent(src).linked_to(dst)) continue;
    if (!state.agent(src).holds(loc)) state.add_location(src, loc);
    state.add_link(src, dst);
    ++added;
  }
  const std::size_t max_links = n * (n - 1) / 2;
  if (state.mean_degree() < target && state.link_count() < max_links) {
    log_warning("maintain_degree: retry budget exhausted at step " +
                std::to_string(state.step()) + " with mean degree " +
                std::to_string(state.mean_degree()));
  }
  return added;
}

std::optional<TrafficRun> growth_step(NetworkState& state,
                                      const PolicyAssignment& policy,
                                      const TrafficOptions& traffic) {
  add_new_agent(state);

  std::vector<double> shares(state.agent_count());
  for (const Agent& a : state.agents()) shares[a.id] = a.transit_share;
  accrue_income(state, shares);
  charge_upkeep(state);

  for (AgentId id = 0; id < state.agent_count(); ++id) try_expand(state, id);

  maintain_degree(state);
  state.advance_step();

  if (state.step() % state.params().traffic_period != 0) return std::nullopt;
  TrafficOptions options = traffic;
  options.tie_seed = state.rng().next();
  TrafficReport report = compute_traffic(state, policy, options);
  const auto normalized = normalized_transit(report);
  for (AgentId id = 0; id < state.agent_count(); ++id) {
    state.set_transit_share(id, normalized[id]);
  }
  return TrafficRun{std::move(report), options.tie_seed};
}

void grow_to(NetworkState& state, std::size_t n_agents,
             const TrafficOptions& traffic) {
  const PolicyAssignment none;
  while (state.agent_count() < n_agents) growth_step(state, none, traffic);
}

}  // namespace asim
