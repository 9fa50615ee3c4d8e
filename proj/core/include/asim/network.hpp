// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asim/grid.hpp"
#include "asim/rng.hpp"

namespace asim {

using AgentId = std::uint32_t;
using Step = std::uint64_t;

/// Model parameters. Defaults are the ASIM v0.3 settings.
struct ModelParams {
  double av_degree = 4.2;
  double extent_cost = 1.5;
  double base_income = 5.0;
  double pop_distr_exp = -1.0;
  double avg_wickedness = 0.1;
  Step traffic_period = 16;
  /// Traffic income per step is income_coeff * |agents| * (normalized
  /// transit share), so the mean traffic income is income_coeff per agent.
  double income_coeff = 10.0;
  /// maintain_degree gives up after this many draws per missing link.
  double link_retry_factor = 100.0;
  /// Per-step carrying cost of each held location, as a multiple of
  /// extent_cost. Zero disables it.
  double extent_upkeep = 3.0;
  /// When set, a cell's population is split evenly among its occupants.
  /// When clear, every occupant serves the whole cell.
  bool shared_population = true;

  /// Throws ConfigError on out-of-range values.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// One autonomous system.
struct Agent {
  AgentId id = 0;
  std::vector<LocationId> locations;  // sorted, non-empty once placed
  std::vector<AgentId> links;         // sorted, symmetric, no self-links
  double money = 0.0;
  double wickedness_rate = 0.0;  // in [0, 0.5]
  /// Normalized transit volume from the most recent traffic run.
  double transit_share = 0.0;
  Step created_at = 0;

  bool holds(LocationId loc) const;
  bool linked_to(AgentId other) const;

  friend bool operator==(const Agent&, const Agent&) = default;
};

/// Complete simulation state: grid, agents, occupancy, clock and RNG.
///
/// Mutation goes through member functions that keep link symmetry and the
/// occupancy inversion intact. Agent ids are dense indices in creation order.
class NetworkState {
 public:
  NetworkState(PopulationGrid grid, ModelParams params, std::uint64_t seed);

  const PopulationGrid& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }
  Step step() const { return step_; }
  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }

  std::span<const Agent> agents() const { return agents_; }
  std::size_t agent_count() const { return agents_.size(); }
  /// Throws LookupError for unknown ids.
  const Agent& agent(AgentId id) const;

  /// Agents present at `loc`, in arrival order.
  std::span<const AgentId> occupants(LocationId loc) const;
  /// Locations with at least one agent, ascending.
  std::span<const LocationId> occupied_locations() const { return occupied_; }

  std::size_t link_count() const { return link_count_; }
  /// 2 * links / agents, or 0 for an empty network.
  double mean_degree() const;

  /// Creates an agent at `loc` stamped with the current step.
  AgentId add_agent(LocationId loc, double wickedness_rate);
  /// Extends `id` to `loc`. Throws StructuralError if already held.
  void add_location(AgentId id, LocationId loc);
  /// Symmetric link. Throws StructuralError on self-links or when the agents
  /// share no location; PreconditionError when already linked.
  void add_link(AgentId a, AgentId b);
  bool shares_location(AgentId a, AgentId b) const;

  void set_money(AgentId id, double money);
  void set_wickedness_rate(AgentId id, double rate);
  void set_transit_share(AgentId id, double share);
  void advance_step() { ++step_; }

  /// Rebuilds a state from persisted parts and verifies every invariant.
  static NetworkState restore(PopulationGrid grid, ModelParams params,
                              Step step, const std::string& rng_state,
                              std::vector<Agent> agents,
                              std::vector<std::vector<AgentId>> occupancy);

  /// Throws StructuralError if link symmetry, occupancy inversion, value
  /// ranges or connectivity do not hold.
  void check_invariants() const;

  friend bool operator==(const NetworkState&, const NetworkState&) = default;

 private:
  Agent& mutable_agent(AgentId id);

  PopulationGrid grid_;
  ModelParams params_;
  Step step_ = 0;
  Rng rng_;
  std::vector<Agent> agents_;
  std::vector<std::vector<AgentId>> occupancy_;
  std::vector<LocationId> occupied_;
  std::size_t link_count_ = 0;
};

/// Sum over the agent's locations of population, divided by the occupant
/// count when params().shared_population is set.
double served_population(const NetworkState& state, AgentId id);

/// served_population for every agent, indexed by id.
std::vector<double> served_populations(const NetworkState& state);

std::size_t degree(const NetworkState& state, AgentId id);

void add_link(NetworkState& state, AgentId a, AgentId b);

/// True when every agent is reachable from agent 0 (vacuously for <= 1 agent).
bool is_connected(const NetworkState& state);

}  // namespace asim
