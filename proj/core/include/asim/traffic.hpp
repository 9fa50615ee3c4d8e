// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asim/network.hpp"
#include "asim/policy.hpp"

namespace asim {

/// How ingress filters at successive hops of one flow combine.
enum class TransitFiltering {
  /// Every filtering hop removes its share of what is left.
  compounding,
  /// Only the first filtering hop after the source acts on a flow.
  once_per_path,
};

struct TrafficOptions {
  std::uint64_t tie_seed = 0;
  /// Worker threads; 0 uses the hardware concurrency. Results do not depend
  /// on this value.
  unsigned workers = 0;
  TransitFiltering transit_filtering = TransitFiltering::compounding;
};

/// Per-agent traffic ledger for one traffic computation.
struct FlowAccount {
  double delivered_good = 0.0;
  double delivered_wicked = 0.0;
  /// Everything the agent carried: emitted (after egress filtering),
  /// received for transit, or received for delivery.
  double transited = 0.0;
  double dropped_good_here = 0.0;
  double dropped_wicked_here = 0.0;

  friend bool operator==(const FlowAccount&, const FlowAccount&) = default;
};

struct TrafficReport {
  std::vector<FlowAccount> per_agent;
  double total_delivered_good = 0.0;
  double total_delivered_wicked = 0.0;
  double total_dropped_good = 0.0;
  double total_dropped_wicked = 0.0;
  /// Gravity volume emitted by all sources before any filtering.
  double total_emitted = 0.0;

  friend bool operator==(const TrafficReport&, const TrafficReport&) = default;
};

/// Per-source salt for tie_key.
constexpr std::uint64_t tie_salt(std::uint64_t tie_seed, AgentId source) {
  return mix64(tie_seed ^ mix64(std::uint64_t{source} + 0x5851F42D4C957F2Dull));
}

/// Per-run random rank of the directed edge predecessor -> node.
constexpr std::uint64_t edge_rank(std::uint64_t tie_seed, AgentId node,
                                  AgentId predecessor) {
  return mix64(tie_seed ^ mix64(std::uint64_t{node} << 32 | predecessor));
}

/// Pseudo-random rank of `predecessor` as the next hop back from `node` on
/// paths rooted at `source`. Among equal-length paths the one whose backward
/// steps all take the minimal-key predecessor is used (ties on the key go to
/// the lower predecessor id), so the choice is a pure function of the tie seed
/// and the endpoints. `source` here is tie_root of the real source.
constexpr std::uint32_t tie_key(std::uint64_t tie_seed, AgentId source,
                                AgentId node, AgentId predecessor) {
  return static_cast<std::uint32_t>(
      (tie_salt(tie_seed, source) ^ edge_rank(tie_seed, node, predecessor)) >> 32);
}

/// The agent whose salt orders paths leaving `source`: its sole neighbour when
/// it has exactly one link, otherwise itself. A single-homed agent therefore
/// routes exactly like its upstream, which lets the engine fold such agents
/// into their neighbours.
AgentId tie_root(const NetworkState& state, AgentId source);

/// Minimal-hop path from a to b (inclusive). Throws StructuralError when b is
/// unreachable.
std::vector<AgentId> shortest_path(const NetworkState& state, AgentId a,
                                   AgentId b, std::uint64_t tie_seed);

/// Unweighted BFS distance. Throws StructuralError when unreachable.
std::size_t hop_distance(const NetworkState& state, AgentId a, AgentId b);

/// Gravity volume pop(a) * pop(b) / d(a,b)^2. Requires a != b.
double gravity_flow(const NetworkState& state, AgentId a, AgentId b);

/// Routes every ordered-pair gravity flow over its tie-broken shortest path,
/// applying egress, ingress and blacklist interventions along the way.
TrafficReport compute_traffic(const NetworkState& state,
                              const PolicyAssignment& policy,
                              const TrafficOptions& options = {});

/// Delivered wicked / delivered total over all agents; 0 when nothing arrives.
double wicked_rate(const TrafficReport& report);
/// Same, for traffic delivered to one agent.
double wicked_rate(const TrafficReport& report, AgentId id);
/// Same, pooled over a group of agents.
double wicked_rate(const TrafficReport& report, std::span<const AgentId> group);

/// Each agent's transited volume divided by the sum over all agents.
std::vector<double> normalized_transit(const TrafficReport& report);

}  // namespace asim
