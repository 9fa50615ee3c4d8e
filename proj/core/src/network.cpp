// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "asim/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "asim/errors.hpp"

namespace asim {

namespace {

template <typename T>
bool sorted_contains(const std::vector<T>& v, T x) {
  return std::binary_search(v.begin(), v.end(), x);
}

template <typename T>
void sorted_insert(std::vector<T>& v, T x) {
  v.insert(std::upper_bound(v.begin(), v.end(), x), x);
}

}  // namespace

void ModelParams::validate() const {
  if (!(av_degree >= 0.0)) throw ConfigError("av_degree must be >= 0");
  if (!(extent_cost >= 0.0)) throw ConfigError("extent_cost must be >= 0");
  if (!(base_income >= 0.0)) throw ConfigError("base_income must be >= 0");
  if (!(pop_distr_exp <= 0.0)) throw ConfigError("pop_distr_exp must be <= 0");
  if (!(avg_wickedness > 0.0)) throw ConfigError("wickedness must be > 0");
  if (traffic_period < 1) throw ConfigError("traffic_period must be >= 1");
  if (!(income_coeff >= 0.0)) throw ConfigError("income_coeff must be >= 0");
  if (!(extent_upkeep >= 0.0)) throw ConfigError("extent_upkeep must be >= 0");
  if (!(link_retry_factor >= 1.0)) {
    throw ConfigError("link_retry_factor must be >= 1");
  }
}

bool Agent::holds(LocationId loc) const {
  return sorted_contains(locations, loc);
}

bool Agent::linked_to(AgentId other) const {
  return sorted_contains(links, other);
}

NetworkState::NetworkState(PopulationGrid grid, ModelParams params,
                           std::uint64_t seed)
    : grid_(std::move(grid)), params_(params), rng_(seed) {
  params_.validate();
  occupancy_.resize(grid_.size());
}

const Agent& NetworkState::agent(AgentId id) const {
  if (id >= agents_.size()) {
    throw LookupError("unknown agent " + std::to_string(id));
  }
  return agents_[id];
}

Agent& NetworkState::mutable_agent(AgentId id) {
  if (id >= agents_.size()) {
    throw LookupError("unknown agent " + std::to_string(id));
  }
  return agents_[id];
}

std::span<const AgentId> NetworkState::occupants(LocationId loc) const {
  if (loc >= occupancy_.size()) {
    throw LookupError("location " + std::to_string(loc) + " outside grid");
  }
  return occupancy_[loc];
}

double NetworkState::mean_degree() const {
  if (agents_.empty()) return 0.0;
  return 2.0 * static_cast<double>(link_count_) /
         static_cast<double>(agents_.size());
}

AgentId NetworkState::add_agent(LocationId loc, double wickedness_rate) {
  if (loc >= grid_.size()) {
    throw LookupError("location " + std::to_string(loc) + " outside grid");
  }
  if (!(wickedness_rate >= 0.0 && wickedness_rate <= 0.5)) {
    throw PreconditionError("wickedness rate must lie in [0, 0.5]");
  }
  const auto id = static_cast<AgentId>(agents_.size());
  Agent a;
  a.id = id;
  a.created_at = step_;
  agents_.push_back(std::move(a));
  set_wickedness_rate(id, wickedness_rate);
  add_location(id, loc);
  return id;
}

void NetworkState::add_location(AgentId id, LocationId loc) {
  Agent& a = mutable_agent(id);
  if (loc >= grid_.size()) {
    throw LookupError("location " + std::to_string(loc) + " outside grid");
  }
  if (a.holds(loc)) {
    throw StructuralError("agent " + std::to_string(id) +
                          " already holds location " + std::to_string(loc));
  }
  sorted_insert(a.locations, loc);
  if (occupancy_[loc].empty()) sorted_insert(occupied_, loc);
  occupancy_[loc].push_back(id);
}

bool NetworkState::shares_location(AgentId a, AgentId b) const {
  const auto& la = agent(a).locations;
  const auto& lb = agent(b).locations;
  auto i = la.begin();
  auto j = lb.begin();
  while (i != la.end() && j != lb.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

void NetworkState::add_link(AgentId a, AgentId b) {
  if (a == b) {
    throw StructuralError("self-link on agent " + std::to_string(a));
  }
  Agent& x = mutable_agent(a);
  Agent& y = mutable_agent(b);
  if (x.linked_to(b)) {
    throw PreconditionError("agents " + std::to_string(a) + " and " +
                            std::to_string(b) + " are already linked");
  }
  if (!shares_location(a, b)) {
    throw StructuralError("agents " + std::to_string(a) + " and " +
                          std::to_string(b) + " share no location");
  }
  sorted_insert(x.links, b);
  sorted_insert(y.links, a);
  ++link_count_;
}

void NetworkState::set_money(AgentId id, double money) {
  if (!(money >= 0.0)) throw StructuralError("money must stay non-negative");
  mutable_agent(id).money = money;
}

void NetworkState::set_wickedness_rate(AgentId id, double rate) {
  if (!(rate >= 0.0 && rate <= 0.5)) {
    throw PreconditionError("wickedness rate must lie in [0, 0.5]");
  }
  mutable_agent(id).wickedness_rate = rate;
}

void NetworkState::set_transit_share(AgentId id, double share) {
  if (!(share >= 0.0)) throw PreconditionError("transit share must be >= 0");
  mutable_agent(id).transit_share = share;
}

NetworkState NetworkState::restore(PopulationGrid grid, ModelParams params,
                                   Step step, const std::string& rng_state,
                                   std::vector<Agent> agents,
                                   std::vector<std::vector<AgentId>> occupancy) {
  NetworkState s(std::move(grid), params, 0);
  if (occupancy.size() != s.grid_.size()) {
    throw StructuralError("occupancy table does not match grid size");
  }
  s.step_ = step;
  s.rng_.set_state(rng_state);
  s.agents_ = std::move(agents);
  s.occupancy_ = std::move(occupancy);
  std::size_t endpoints = 0;
  for (const Agent& a : s.agents_) endpoints += a.links.size();
  if (endpoints % 2 != 0) throw StructuralError("asymmetric link table");
  s.link_count_ = endpoints / 2;
  for (LocationId loc = 0; loc < s.occupancy_.size(); ++loc) {
    if (!s.occupancy_[loc].empty()) s.occupied_.push_back(loc);
  }
  s.check_invariants();
  return s;
}

void NetworkState::check_invariants() const {
  std::size_t held = 0;
  for (AgentId id = 0; id < agents_.size(); ++id) {
    const Agent& a = agents_[id];
    const std::string who = "agent " + std::to_string(id);
    if (a.id != id) throw StructuralError(who + ": id out of order");
    if (a.locations.empty()) throw StructuralError(who + ": no locations");
    if (!std::is_sorted(a.locations.begin(), a.locations.end()) ||
        std::adjacent_find(a.locations.begin(), a.locations.end()) !=
            a.locations.end()) {
      throw StructuralError(who + ": location list not a sorted set");
    }
    if (!std::is_sorted(a.links.begin(), a.links.end()) ||
        std::adjacent_find(a.links.begin(), a.links.end()) != a.links.end()) {
      throw StructuralError(who + ": link list not a sorted set");
    }
    if (!(a.money >= 0.0)) throw StructuralError(who + ": negative money");
    if (!(a.wickedness_rate >= 0.0 && a.wickedness_rate <= 0.5)) {
      throw StructuralError(who + ": wickedness rate outside [0, 0.5]");
    }
    if (!(a.transit_share >= 0.0)) {
      throw StructuralError(who + ": negative transit share");
    }
    for (AgentId other : a.links) {
      if (other == id) throw StructuralError(who + ": self-link");
      if (other >= agents_.size() || !agents_[other].linked_to(id)) {
        throw StructuralError(who + ": asymmetric link");
      }
    }
    for (LocationId loc : a.locations) {
      if (loc >= occupancy_.size()) {
        throw StructuralError(who + ": location outside grid");
      }
      const auto& occ = occupancy_[loc];
      if (std::find(occ.begin(), occ.end(), id) == occ.end()) {
        throw StructuralError(who + ": missing from occupancy");
      }
    }
    held += a.locations.size();
  }
  std::size_t occupied_entries = 0;
  for (const auto& occ : occupancy_) {
    occupied_entries += occ.size();
    for (AgentId id : occ) {
      if (id >= agents_.size()) {
        throw StructuralError("occupancy names unknown agent");
      }
    }
  }
  if (occupied_entries != held) {
    throw StructuralError("occupancy is not the inverse of agent locations");
  }
  if (!is_connected(*this)) throw StructuralError("network is disconnected");
}

double served_population(const NetworkState& state, AgentId id) {
  double pop = 0.0;
  for (LocationId loc : state.agent(id).locations) {
    const double cell = static_cast<double>(state.grid().population(loc));
    pop += state.params().shared_population
               ? cell / static_cast<double>(state.occupants(loc).size())
               : cell;
  }
  return pop;
}

std::vector<double> served_populations(const NetworkState& state) {
  const auto& grid = state.grid();
  std::vector<double> share(grid.size(), 0.0);
  for (LocationId loc : state.occupied_locations()) {
    share[loc] = static_cast<double>(grid.population(loc));
    if (state.params().shared_population) {
      share[loc] /= static_cast<double>(state.occupants(loc).size());
    }
  }
  std::vector<double> pop(state.agent_count(), 0.0);
  for (const Agent& a : state.agents()) {
    double sum = 0.0;
    for (LocationId loc : a.locations) sum += share[loc];
    pop[a.id] = sum;
  }
  return pop;
}

std::size_t degree(const NetworkState& state, AgentId id) {
  return state.agent(id).links.size();
}

void add_link(NetworkState& state, AgentId a, AgentId b) {
  state.add_link(a, b);
}

bool is_connected(const NetworkState& state) {
  const std::size_t n = state.agent_count();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<AgentId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const AgentId v = stack.back();
    stack.pop_back();
    for (AgentId u : state.agents()[v].links) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == n;
}

}  // namespace asim
