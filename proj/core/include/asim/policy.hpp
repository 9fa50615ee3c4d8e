// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asim/network.hpp"
#include "asim/rng.hpp"

namespace asim {

enum class PolicyKind {
  none,
  egress,
  ingress_user,
  ingress_all,
  egress_and_ingress,
  blacklist,
};

std::string_view to_string(PolicyKind kind);
/// Accepts the enumerator names, with '-' allowed for '_'.
PolicyKind parse_policy_kind(std::string_view text);

/// Agents with degree >= size_cap are too big to block.
inline constexpr std::size_t kUnlimitedSizeCap =
    std::numeric_limits<std::size_t>::max();

struct PolicySpec {
  PolicyKind kind = PolicyKind::none;
  double e_out = 0.2;
  double e_in = 0.2;
  double blacklist_threshold = 0.5;
  std::size_t size_cap = kUnlimitedSizeCap;

  void validate() const;

  bool filters_egress() const {
    return kind == PolicyKind::egress || kind == PolicyKind::egress_and_ingress;
  }
  /// Ingress filtering of flows passing through.
  bool filters_transit() const {
    return kind == PolicyKind::ingress_all ||
           kind == PolicyKind::egress_and_ingress;
  }
  /// Ingress filtering of flows terminating here.
  bool filters_delivery() const {
    return kind == PolicyKind::ingress_user || filters_transit();
  }
  bool blacklists() const { return kind == PolicyKind::blacklist; }

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

std::string size_cap_to_string(std::size_t cap);
std::size_t parse_size_cap(std::string_view text);

/// Sparse agent -> policy map; agents without an entry do nothing.
class PolicyAssignment {
 public:
  PolicyAssignment() = default;

  void set(AgentId id, const PolicySpec& spec);
  const PolicySpec& get(AgentId id) const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<AgentId, PolicySpec>& entries() const { return entries_; }

  /// Throws LookupError for ids not in `state`, ConfigError for bad specs.
  void validate(const NetworkState& state) const;

 private:
  std::map<AgentId, PolicySpec> entries_;
};

/// Every id in `interveners` gets `spec`.
PolicyAssignment make_assignment(std::span<const AgentId> interveners,
                                 const PolicySpec& spec);

/// Which agents intervene.
struct SelectionStrategy {
  enum class Kind { top_k, random_fraction, top_k_fraction, top_k_plus_small };

  Kind kind = Kind::top_k;
  std::size_t k = 20;
  double fraction = 1.0;  // p, f or q depending on kind

  static SelectionStrategy top_k(std::size_t k);
  static SelectionStrategy random_fraction(double p);
  static SelectionStrategy top_k_fraction(std::size_t k, double f);
  static SelectionStrategy top_k_plus_small(std::size_t k, double q);

  void validate() const;
  /// Kind name, e.g. "top_k_fraction".
  std::string name() const;
  /// Parameters, e.g. "20/0.6" for top_k_fraction(20, 0.6).
  std::string parameter() const;

  friend bool operator==(const SelectionStrategy&,
                         const SelectionStrategy&) = default;
};

/// Parses "top_k:20", "random_fraction:0.3", "top_k_fraction:20:0.6" or
/// "top_k_plus_small:20:0.1".
SelectionStrategy parse_strategy(std::string_view text);
std::string to_string(const SelectionStrategy& strategy);

/// The k highest-degree agents, ties to the lower id, in rank order.
std::vector<AgentId> top_k_by_degree(const NetworkState& state, std::size_t k);

/// Intervening agents for `strategy`, ascending by id.
std::vector<AgentId> select_interveners(const NetworkState& state,
                                        const SelectionStrategy& strategy,
                                        Rng& rng);

/// Agents with rate >= threshold and degree < size_cap, ascending by id.
std::vector<AgentId> blacklist_set(const NetworkState& state, double threshold,
                                   std::size_t size_cap);

}  // namespace asim
