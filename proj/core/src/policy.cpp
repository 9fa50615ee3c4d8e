// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "asim/policy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "asim/errors.hpp"
#include "asim/log.hpp"

namespace asim {

namespace {

std::string normalized(std::string_view text) {
  std::string s(text);
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("bad " + std::string(what) + ": '" + std::string(text) +
                      "'");
  }
  return value;
}

double parse_real(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("bad " + std::string(what) + ": '" + std::string(text) +
                      "'");
  }
  return value;
}

std::string format_real(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// Chooses exactly `m` of `pool` without replacement (partial Fisher-Yates).
std::vector<AgentId> sample_without_replacement(std::vector<AgentId> pool,
                                                std::size_t m, Rng& rng) {
  m = std::min(m, pool.size());
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  return pool;
}

}  // namespace

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::none: return "none";
    case PolicyKind::egress: return "egress";
    case PolicyKind::ingress_user: return "ingress_user";
    case PolicyKind::ingress_all: return "ingress_all";
    case PolicyKind::egress_and_ingress: return "egress_and_ingress";
    case PolicyKind::blacklist: return "blacklist";
  }
  return "?";
}

PolicyKind parse_policy_kind(std::string_view text) {
  const std::string s = normalized(text);
  for (PolicyKind k :
       {PolicyKind::none, PolicyKind::egress, PolicyKind::ingress_user,
        PolicyKind::ingress_all, PolicyKind::egress_and_ingress,
        PolicyKind::blacklist}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown policy kind '" + std::string(text) + "'");
}

void PolicySpec::validate() const {
  if (!(e_out >= 0.0 && e_out <= 1.0)) throw ConfigError("e_out outside [0,1]");
  if (!(e_in >= 0.0 && e_in <= 1.0)) throw ConfigError("e_in outside [0,1]");
  if (!(blacklist_threshold >= 0.0 && blacklist_threshold <= 0.5)) {
    throw ConfigError("blacklist threshold outside [0,0.5]");
  }
}

std::string size_cap_to_string(std::size_t cap) {
  return cap == kUnlimitedSizeCap ? "unlimited" : std::to_string(cap);
}

std::size_t parse_size_cap(std::string_view text) {
  if (text == "unlimited" || text == "none" || text == "inf") {
    return kUnlimitedSizeCap;
  }
  return parse_count(text, "size cap");
}

void PolicyAssignment::set(AgentId id, const PolicySpec& spec) {
  spec.validate();
  if (spec.kind == PolicyKind::none) {
    entries_.erase(id);
  } else {
    entries_[id] = spec;
  }
}

const PolicySpec& PolicyAssignment::get(AgentId id) const {
  static const PolicySpec kNone{};
  const auto it = entries_.find(id);
  return it == entries_.end() ? kNone : it->second;
}

void PolicyAssignment::validate(const NetworkState& state) const {
  for (const auto& [id, spec] : entries_) {
    state.agent(id);
    spec.validate();
  }
}

PolicyAssignment make_assignment(std::span<const AgentId> interveners,
                                 const PolicySpec& spec) {
  PolicyAssignment out;
  for (AgentId id : interveners) out.set(id, spec);
  return out;
}

SelectionStrategy SelectionStrategy::top_k(std::size_t k) {
  return {Kind::top_k, k, 1.0};
}
SelectionStrategy SelectionStrategy::random_fraction(double p) {
  return {Kind::random_fraction, 1, p};
}
SelectionStrategy SelectionStrategy::top_k_fraction(std::size_t k, double f) {
  return {Kind::top_k_fraction, k, f};
}
SelectionStrategy SelectionStrategy::top_k_plus_small(std::size_t k, double q) {
  return {Kind::top_k_plus_small, k, q};
}

void SelectionStrategy::validate() const {
  if (k < 1) throw ConfigError("strategy k must be >= 1");
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ConfigError("strategy fraction outside [0,1]");
  }
}

std::string SelectionStrategy::name() const {
  switch (kind) {
    case Kind::top_k: return "top_k";
    case Kind::random_fraction: return "random_fraction";
    case Kind::top_k_fraction: return "top_k_fraction";
    case Kind::top_k_plus_small: return "top_k_plus_small";
  }
  return "?";
}

std::string SelectionStrategy::parameter() const {
  switch (kind) {
    case Kind::top_k: return std::to_string(k);
    case Kind::random_fraction: return format_real(fraction);
    case Kind::top_k_fraction:
    case Kind::top_k_plus_small:
      return std::to_string(k) + "/" + format_real(fraction);
  }
  return "?";
}

SelectionStrategy parse_strategy(std::string_view text) {
  const auto parts = split(text, ':');
  const std::string kind = normalized(parts[0]);
  SelectionStrategy s;
  if (kind == "top_k" && parts.size() == 2) {
    s = SelectionStrategy::top_k(parse_count(parts[1], "k"));
  } else if (kind == "random_fraction" && parts.size() == 2) {
    s = SelectionStrategy::random_fraction(parse_real(parts[1], "fraction"));
  } else if (kind == "top_k_fraction" && parts.size() == 3) {
    s = SelectionStrategy::top_k_fraction(parse_count(parts[1], "k"),
                                          parse_real(parts[2], "fraction"));
  } else if (kind == "top_k_plus_small" && parts.size() == 3) {
    s = SelectionStrategy::top_k_plus_small(parse_count(parts[1], "k"),
                                            parse_real(parts[2], "fraction"));
  } else {
    throw ConfigError("unrecognized strategy '" + std::string(text) + "'");
  }
  s.validate();
  return s;
}

std::string to_string(const SelectionStrategy& strategy) {
  std::string p = strategy.parameter();
  std::replace(p.begin(), p.end(), '/', ':');
  return strategy.name() + ":" + p;
}

std::vector<AgentId> top_k_by_degree(const NetworkState& state, std::size_t k) {
  std::vector<AgentId> ids(state.agent_count());
  std::iota(ids.begin(), ids.end(), AgentId{0});
  k = std::min(k, ids.size());
  const auto agents = state.agents();
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k),
                    ids.end(), [&](AgentId a, AgentId b) {
                      const auto da = agents[a].links.size();
                      const auto db = agents[b].links.size();
                      return da != db ? da > db : a < b;
                    });
  ids.resize(k);
  return ids;
}

namespace {

// floor(f * n), immune to products like 0.29 * 100 = 28.999999999999996.
std::size_t floor_share(double f, std::size_t n) {
  const double x = f * static_cast<double>(n);
  return std::min(n, static_cast<std::size_t>(std::floor(x + 1e-9 * std::max(1.0, x))));
}

}  // namespace

std::vector<AgentId> select_interveners(const NetworkState& state,
                                        const SelectionStrategy& strategy,
                                        Rng& rng) {
  strategy.validate();
  const std::size_t n = state.agent_count();
  std::size_t k = strategy.k;
  if (strategy.kind != SelectionStrategy::Kind::random_fraction && k > n) {
    log_warning("strategy k=" + std::to_string(k) + " exceeds " +
                std::to_string(n) + " agents; truncating");
    k = n;
  }

  std::vector<AgentId> chosen;
  switch (strategy.kind) {
    case SelectionStrategy::Kind::top_k:
      chosen = top_k_by_degree(state, k);
      break;
    case SelectionStrategy::Kind::random_fraction: {
      std::vector<AgentId> all(n);
      std::iota(all.begin(), all.end(), AgentId{0});
      const auto m = floor_share(strategy.fraction, n);
      chosen = sample_without_replacement(std::move(all), m, rng);
      break;
    }
    case SelectionStrategy::Kind::top_k_fraction: {
      auto top = top_k_by_degree(state, k);
      const auto m = floor_share(strategy.fraction, k);
      chosen = m == top.size() ? std::move(top)
                               : sample_without_replacement(std::move(top), m, rng);
      break;
    }
    case SelectionStrategy::Kind::top_k_plus_small: {
      chosen = top_k_by_degree(state, k);
      std::vector<char> in_top(n, 0);
      for (AgentId id : chosen) in_top[id] = 1;
      std::vector<AgentId> rest;
      rest.reserve(n - chosen.size());
      for (AgentId id = 0; id < n; ++id) {
        if (!in_top[id]) rest.push_back(id);
      }
      const auto m = floor_share(strategy.fraction, n - k);
      const auto extra = sample_without_replacement(std::move(rest), m, rng);
      chosen.insert(chosen.end(), extra.begin(), extra.end());
      break;
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<AgentId> blacklist_set(const NetworkState& state, double threshold,
                                   std::size_t size_cap) {
  if (!(threshold >= 0.0 && threshold <= 0.5)) {
    throw PreconditionError("blacklist threshold outside [0,0.5]");
  }
  std::vector<AgentId> out;
  for (const Agent& a : state.agents()) {
    if (a.wickedness_rate >= threshold && a.links.size() < size_cap) {
      out.push_back(a.id);
    }
  }
  return out;
}

}  // namespace asim
