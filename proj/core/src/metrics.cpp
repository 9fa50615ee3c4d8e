// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "asim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "asim/errors.hpp"
#include "asim/rng.hpp"
#include "asim/wickedness.hpp"

namespace asim {
namespace {

// counts[x] = number of samples equal to x, for x = 0..max.
Ccdf ccdf_from_counts(const std::vector<std::uint64_t>& counts,
                      std::size_t first) {
  std::uint64_t total = 0;
  for (std::size_t x = first; x < counts.size(); ++x) total += counts[x];
  Ccdf out;
  if (total == 0) return out;
  std::uint64_t at_least = total;
  for (std::size_t x = first; x < counts.size(); ++x) {
    out.push_back({static_cast<double>(x),
                   static_cast<double>(at_least) / static_cast<double>(total)});
    at_least -= counts[x];
  }
  return out;
}

void bfs(const NetworkState& state, AgentId source,
         std::vector<std::int32_t>& dist, std::vector<AgentId>& queue) {
  std::fill(dist.begin(), dist.end(), -1);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const AgentId u = queue[head];
    for (AgentId v : state.agent(u).links) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  if (queue.size() != dist.size()) {
    throw PreconditionError("path lengths need a connected network");
  }
}

// Value of a right-continuous CCDF step function at x.
double ccdf_at(const Ccdf& c, double x) {
  if (c.empty()) return 0.0;
  if (x <= c.front().x) return 1.0;
  // First point strictly beyond x; the answer is the one after the last
  // point at or below x.
  auto it = std::upper_bound(c.begin(), c.end(), x,
                             [](double v, const CcdfPoint& p) { return v < p.x; });
  const auto& prev = *(it - 1);
  if (prev.x == x) return prev.fraction;
  return it == c.end() ? 0.0 : it->fraction;
}

}  // namespace

DegreeStats degree_stats(const NetworkState& state) {
  if (state.agent_count() == 0) {
    throw PreconditionError("degree_stats needs at least one agent");
  }
  std::vector<std::uint64_t> counts;
  for (const Agent& a : state.agents()) {
    const std::size_t d = a.links.size();
    if (counts.size() <= d) counts.resize(d + 1, 0);
    ++counts[d];
  }
  DegreeStats out;
  out.mean = state.mean_degree();
  out.ccdf = ccdf_from_counts(counts, 0);
  return out;
}

Ccdf path_length_ccdf(const NetworkState& state, std::size_t sample_pairs,
                      std::uint64_t seed) {
  const std::size_t n = state.agent_count();
  if (n < 2) return {};
  std::vector<std::int32_t> dist(n);
  std::vector<AgentId> queue;
  queue.reserve(n);
  std::vector<std::uint64_t> counts;
  auto count = [&](std::int32_t d) {
    const auto i = static_cast<std::size_t>(d);
    if (counts.size() <= i) counts.resize(i + 1, 0);
    ++counts[i];
  };

  if (sample_pairs == 0) {
    for (AgentId a = 0; a < n; ++a) {
      bfs(state, a, dist, queue);
      for (AgentId b = a + 1; b < n; ++b) count(dist[b]);
    }
  } else {
    // Draw all pairs first, then run one BFS per distinct source.
    Rng rng(seed);
    std::map<AgentId, std::vector<AgentId>> by_source;
    for (std::size_t i = 0; i < sample_pairs; ++i) {
      const auto a = static_cast<AgentId>(rng.uniform_below(n));
      auto b = static_cast<AgentId>(rng.uniform_below(n - 1));
      if (b >= a) ++b;
      by_source[a].push_back(b);
    }
    for (const auto& [a, targets] : by_source) {
      bfs(state, a, dist, queue);
      for (AgentId b : targets) count(dist[b]);
    }
  }
  return ccdf_from_counts(counts, 1);
}

Ccdf wickedness_ccdf(const NetworkState& state, std::size_t bins) {
  if (bins == 0) throw PreconditionError("wickedness_ccdf needs bins >= 1");
  std::vector<double> levels;
  levels.reserve(state.agent_count());
  for (const Agent& a : state.agents()) {
    levels.push_back(wickedness_level(state, a.id));
  }
  if (levels.empty()) return {};
  const double top = *std::max_element(levels.begin(), levels.end());
  if (top <= 0.0) return {{0.0, 1.0}};
  std::sort(levels.begin(), levels.end());
  const double total = static_cast<double>(levels.size());
  Ccdf out;
  for (std::size_t i = 0; i <= bins; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(bins);
    // Compare on the normalized scale so the top level counts at x = 1.
    const auto first = std::partition_point(
        levels.begin(), levels.end(),
        [&](double level) { return level / top < x; });
    out.push_back({x, static_cast<double>(levels.end() - first) / total});
  }
  return out;
}

double ks_distance(const Ccdf& a, const Ccdf& b) {
  double worst = 0.0;
  for (const Ccdf* c : {&a, &b}) {
    for (const CcdfPoint& p : *c) {
      worst = std::max(worst, std::abs(ccdf_at(a, p.x) - ccdf_at(b, p.x)));
    }
  }
  return worst;
}

namespace {

Impact impact_from(double base_good, double base_wicked, double treated_good,
                   double treated_wicked) {
  Impact out;
  const double base_total = base_good + base_wicked;
  const double base_rate = base_total > 0.0 ? base_wicked / base_total : 0.0;
  if (base_rate > 0.0) {
    const double treated_total = treated_good + treated_wicked;
    const double treated_rate =
        treated_total > 0.0 ? treated_wicked / treated_total : 0.0;
    out.wicked_reduction_pct = 100.0 * (base_rate - treated_rate) / base_rate;
  }
  if (base_good > 0.0) {
    out.good_loss_pct = 100.0 * (base_good - treated_good) / base_good;
  }
  return out;
}

}  // namespace

Impact impact(const TrafficReport& baseline, const TrafficReport& treated) {
  return impact_from(baseline.total_delivered_good, baseline.total_delivered_wicked,
                     treated.total_delivered_good, treated.total_delivered_wicked);
}

Impact impact(const TrafficReport& baseline, const TrafficReport& treated,
              std::span<const AgentId> group) {
  if (baseline.per_agent.size() != treated.per_agent.size()) {
    throw PreconditionError("reports cover different agent counts");
  }
  double bg = 0.0, bw = 0.0, tg = 0.0, tw = 0.0;
  for (AgentId id : group) {
    if (id >= baseline.per_agent.size()) {
      throw LookupError("agent " + std::to_string(id) + " not in report");
    }
    bg += baseline.per_agent[id].delivered_good;
    bw += baseline.per_agent[id].delivered_wicked;
    tg += treated.per_agent[id].delivered_good;
    tw += treated.per_agent[id].delivered_wicked;
  }
  return impact_from(bg, bw, tg, tw);
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

}  // namespace asim
