// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "asim/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "asim/errors.hpp"
#include "asim/growth.hpp"
#include "asim/log.hpp"
#include "asim/rng.hpp"
#include "asim/traffic.hpp"
#include "asim/wickedness.hpp"

namespace asim {
namespace {

constexpr std::uint64_t kSelectTag = 0x5E1EC7;
constexpr std::uint64_t kTieTag = 0x71E5EED;
constexpr std::uint64_t kEvolveTag = 0xE7017E;

std::string num(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : ""; }

TrafficOptions traffic_options(const ExperimentConfig& config,
                               std::uint64_t tie_seed) {
  TrafficOptions o;
  o.tie_seed = tie_seed;
  o.workers = config.workers;
  o.transit_filtering = config.transit_filtering;
  return o;
}

std::vector<AgentId> complement(std::size_t n, const std::vector<AgentId>& group) {
  std::vector<char> in(n, 0);
  for (AgentId a : group) in[a] = 1;
  std::vector<AgentId> out;
  for (AgentId a = 0; a < n; ++a) {
    if (!in[a]) out.push_back(a);
  }
  return out;
}

struct RowBase {
  std::string scenario;
  std::uint64_t seed;
  std::size_t n_agents;
  std::string snapshot_id;
};

ImpactRow make_row(const RowBase& base, const PolicySpec& spec,
                   const SelectionStrategy& strategy, const TrafficReport& baseline,
                   const TrafficReport& treated) {
  ImpactRow row;
  row.scenario = base.scenario;
  row.seed = base.seed;
  row.n_agents = base.n_agents;
  row.policy = spec;
  row.strategy = strategy.name();
  row.strategy_param = strategy.parameter();
  row.baseline_wicked_rate = wicked_rate(baseline);
  row.treated_wicked_rate = wicked_rate(treated);
  const Impact im = impact(baseline, treated);
  row.wicked_reduction_pct = im.wicked_reduction_pct;
  row.good_loss_pct = im.good_loss_pct;
  row.snapshot_id = base.snapshot_id;
  return row;
}

ImpactRow make_group_row(const RowBase& base, const PolicySpec& spec,
                         const SelectionStrategy& strategy,
                         const TrafficReport& baseline, const TrafficReport& treated,
                         std::span<const AgentId> group, std::string scope) {
  ImpactRow row = make_row(base, spec, strategy, baseline, treated);
  row.baseline_wicked_rate = wicked_rate(baseline, group);
  row.treated_wicked_rate = wicked_rate(treated, group);
  const Impact im = impact(baseline, treated, group);
  row.wicked_reduction_pct = im.wicked_reduction_pct;
  row.good_loss_pct = im.good_loss_pct;
  row.scope = std::move(scope);
  return row;
}

void report(const Progress& progress, const std::string& line) {
  if (progress) progress(line);
}

std::string describe(const ImpactRow& row) {
  std::ostringstream s;
  s << row.scenario << " seed=" << row.seed << " " << to_string(row.policy.kind)
    << " " << row.strategy << "(" << row.strategy_param << ")"
    << " reduction=" << opt(row.wicked_reduction_pct) << "%"
    << " good_loss=" << opt(row.good_loss_pct) << "%";
  return s.str();
}

// Evenly spaced values 0, step, ..., up to max (inclusive within rounding).
std::vector<double> grid_values(double max, double step) {
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor(max / step + 1e-9));
  // Snapped to 12 decimals so 3 * 0.05 prints as 0.15.
  for (std::size_t i = 0; i <= count; ++i) {
    out.push_back(std::round(static_cast<double>(i) * step * 1e12) / 1e12);
  }
  return out;
}

}  // namespace

void write_impact_csv(std::ostream& out, std::span<const ImpactRow> rows) {
  out << "scenario,seed,n_agents,policy_kind,e_in,e_out,theta,size_cap,strategy,"
         "strategy_param,baseline_wicked_rate,treated_wicked_rate,"
         "wicked_reduction_pct,good_loss_pct,scope,snapshot_id\n";
  for (const ImpactRow& r : rows) {
    out << r.scenario << ',' << r.seed << ',' << r.n_agents << ','
        << to_string(r.policy.kind) << ',' << num(r.policy.e_in) << ','
        << num(r.policy.e_out) << ',' << num(r.policy.blacklist_threshold) << ','
        << size_cap_to_string(r.policy.size_cap) << ',' << r.strategy << ','
        << r.strategy_param << ',' << num(r.baseline_wicked_rate) << ','
        << num(r.treated_wicked_rate) << ',' << opt(r.wicked_reduction_pct) << ','
        << opt(r.good_loss_pct) << ',' << r.scope << ',' << r.snapshot_id << '\n';
  }
}

std::string impact_csv(std::span<const ImpactRow> rows) {
  std::ostringstream s;
  write_impact_csv(s, rows);
  return s.str();
}

void write_summary_csv(std::ostream& out, std::span<const ImpactRow> rows) {
  using Key = std::tuple<std::string, std::size_t, std::string, double, double, double,
                         std::size_t, std::string, std::string, std::string>;
  std::vector<Key> order;
  std::map<Key, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const ImpactRow& r : rows) {
    Key key{r.scenario,       r.n_agents,       std::string(to_string(r.policy.kind)),
            r.policy.e_in,    r.policy.e_out,   r.policy.blacklist_threshold,
            r.policy.size_cap, r.strategy,      r.strategy_param,
            r.scope};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    if (r.wicked_reduction_pct) it->second.first.push_back(*r.wicked_reduction_pct);
    if (r.good_loss_pct) it->second.second.push_back(*r.good_loss_pct);
  }
  out << "scenario,n_agents,policy_kind,e_in,e_out,theta,size_cap,strategy,"
         "strategy_param,scope,seeds,mean_wicked_reduction_pct,"
         "sd_wicked_reduction_pct,mean_good_loss_pct,sd_good_loss_pct\n";
  for (const Key& key : order) {
    const auto& [red, loss] = groups.at(key);
    const Summary r = summarize(red);
    const Summary l = summarize(loss);
    out << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ','
        << num(std::get<3>(key)) << ',' << num(std::get<4>(key)) << ','
        << num(std::get<5>(key)) << ',' << size_cap_to_string(std::get<6>(key)) << ','
        << std::get<7>(key) << ',' << std::get<8>(key) << ',' << std::get<9>(key) << ','
        << r.count << ',' << num(r.mean) << ',' << num(r.stddev) << ','
        << num(l.mean) << ',' << num(l.stddev) << '\n';
  }
}

void write_metric_csv(std::ostream& out, std::span<const MetricRow> rows,
                      const std::string& snapshot_id) {
  out << "metric,x,value,snapshot_id\n";
  for (const MetricRow& r : rows) {
    out << r.metric << ',' << num(r.x) << ',' << num(r.value) << ',' << snapshot_id
        << '\n';
  }
}

std::uint64_t selection_seed(std::uint64_t seed) { return derive_seed(seed, kSelectTag); }
std::uint64_t tie_seed_for(std::uint64_t seed) { return derive_seed(seed, kTieTag); }

NetworkState grow_network(const ExperimentConfig& config, std::uint64_t seed,
                          std::size_t n_agents, const Progress& progress) {
  const auto& g = config.grid;
  NetworkState state(build_grid(g.width, g.height, config.model.pop_distr_exp,
                                g.total_population, g.seed),
                     config.model, seed);
  const TrafficOptions options = traffic_options(config, 0);
  const PolicyAssignment none;
  while (state.agent_count() < n_agents) {
    growth_step(state, none, options);
    if (state.agent_count() % 1000 == 0) {
      report(progress, "grown to " + std::to_string(state.agent_count()) + " agents");
    }
  }
  return state;
}

std::vector<ImpactRow> run_instant(const ExperimentConfig& config,
                                   const NetworkState& state,
                                   const std::string& snapshot_id,
                                   const Progress& progress) {
  std::vector<ImpactRow> rows;
  const auto specs = config.policy_specs();
  for (std::uint64_t seed : config.seeds) {
    const TrafficOptions options = traffic_options(config, tie_seed_for(seed));
    const TrafficReport baseline = compute_traffic(state, {}, options);
    const RowBase base{"instant", seed, state.agent_count(), snapshot_id};
    for (const SelectionStrategy& strategy : config.strategies) {
      Rng rng(selection_seed(seed));
      const auto interveners = select_interveners(state, strategy, rng);
      const auto others = complement(state.agent_count(), interveners);
      for (const PolicySpec& spec : specs) {
        const TrafficReport treated =
            compute_traffic(state, make_assignment(interveners, spec), options);
        rows.push_back(make_row(base, spec, strategy, baseline, treated));
        report(progress, describe(rows.back()));
        rows.push_back(make_group_row(base, spec, strategy, baseline, treated,
                                      interveners, "interveners"));
        rows.push_back(make_group_row(base, spec, strategy, baseline, treated,
                                      others, "others"));
      }
    }
  }
  return rows;
}

std::vector<ImpactRow> run_participation(const ExperimentConfig& config,
                                         const NetworkState& state,
                                         const std::string& snapshot_id,
                                         const Progress& progress) {
  std::vector<ImpactRow> rows;
  PolicySpec spec = config.policy;
  spec.kind = PolicyKind::egress_and_ingress;
  for (std::uint64_t seed : config.seeds) {
    const TrafficOptions options = traffic_options(config, tie_seed_for(seed));
    const TrafficReport baseline = compute_traffic(state, {}, options);
    const RowBase base{"participation", seed, state.agent_count(), snapshot_id};
    for (double f : config.fractions) {
      const auto strategy = SelectionStrategy::top_k_fraction(config.top_k, f);
      Rng rng(selection_seed(seed));
      const auto interveners = select_interveners(state, strategy, rng);
      const TrafficReport treated =
          compute_traffic(state, make_assignment(interveners, spec), options);
      rows.push_back(make_row(base, spec, strategy, baseline, treated));
      report(progress, describe(rows.back()));
    }
  }
  return rows;
}

std::vector<ImpactRow> run_efficacy_grid(const ExperimentConfig& config,
                                         const NetworkState& state,
                                         const std::string& snapshot_id,
                                         const Progress& progress) {
  std::vector<ImpactRow> rows;
  const auto strategy = SelectionStrategy::top_k(config.top_k);
  const auto values = grid_values(config.efficacy_max, config.efficacy_step);
  for (std::uint64_t seed : config.seeds) {
    const TrafficOptions options = traffic_options(config, tie_seed_for(seed));
    const TrafficReport baseline = compute_traffic(state, {}, options);
    const RowBase base{"efficacy_grid", seed, state.agent_count(), snapshot_id};
    Rng rng(selection_seed(seed));
    const auto interveners = select_interveners(state, strategy, rng);
    for (double e_in : values) {
      for (double e_out : values) {
        PolicySpec spec = config.policy;
        spec.kind = PolicyKind::egress_and_ingress;
        spec.e_in = e_in;
        spec.e_out = e_out;
        const TrafficReport treated =
            compute_traffic(state, make_assignment(interveners, spec), options);
        rows.push_back(make_row(base, spec, strategy, baseline, treated));
        report(progress, describe(rows.back()) + " e_in=" + num(e_in) +
                             " e_out=" + num(e_out));
      }
    }
  }
  return rows;
}

std::vector<ImpactRow> run_threshold_curve(const ExperimentConfig& config,
                                           const NetworkState& state,
                                           const std::string& snapshot_id,
                                           const Progress& progress) {
  std::vector<ImpactRow> rows;
  const auto strategy = SelectionStrategy::top_k(config.top_k);
  const auto thetas = grid_values(config.theta_max, config.theta_step);
  for (std::uint64_t seed : config.seeds) {
    const TrafficOptions options = traffic_options(config, tie_seed_for(seed));
    const TrafficReport baseline = compute_traffic(state, {}, options);
    const RowBase base{"blacklist_threshold_curve", seed, state.agent_count(),
                       snapshot_id};
    Rng rng(selection_seed(seed));
    const auto interveners = select_interveners(state, strategy, rng);
    for (double theta : thetas) {
      if (theta <= 0.0) continue;
      PolicySpec spec = config.policy;
      spec.kind = PolicyKind::blacklist;
      spec.blacklist_threshold = std::min(theta, kMaxWickednessRate);
      spec.size_cap = config.curve_size_cap;
      const TrafficReport treated =
          compute_traffic(state, make_assignment(interveners, spec), options);
      rows.push_back(make_row(base, spec, strategy, baseline, treated));
      report(progress, describe(rows.back()) + " theta=" + num(theta));
    }
  }
  return rows;
}

std::vector<ImpactRow> run_blacklist_tradeoff(const ExperimentConfig& config,
                                              const NetworkState& state,
                                              const std::string& snapshot_id,
                                              const Progress& progress) {
  std::vector<ImpactRow> rows;
  const auto strategy = SelectionStrategy::top_k(config.top_k);
  for (std::uint64_t seed : config.seeds) {
    const TrafficOptions options = traffic_options(config, tie_seed_for(seed));
    const TrafficReport baseline = compute_traffic(state, {}, options);
    const RowBase base{"blacklist_tradeoff", seed, state.agent_count(), snapshot_id};
    Rng rng(selection_seed(seed));
    const auto interveners = select_interveners(state, strategy, rng);

    for (std::size_t cap : config.size_caps) {
      auto measure = [&](double theta) {
        PolicySpec spec = config.policy;
        spec.kind = PolicyKind::blacklist;
        spec.blacklist_threshold = theta;
        spec.size_cap = cap;
        const TrafficReport treated =
            compute_traffic(state, make_assignment(interveners, spec), options);
        return make_row(base, spec, strategy, baseline, treated);
      };
      for (double target : config.loss_targets) {
        // Good loss falls as the threshold rises.
        double lo = 0.0;
        double hi = kMaxWickednessRate;
        std::optional<ImpactRow> best;
        double best_gap = 0.0;
        for (std::size_t i = 0; i < config.search_iterations; ++i) {
          const double theta = 0.5 * (lo + hi);
          ImpactRow row = measure(theta);
          const double loss = row.good_loss_pct.value_or(0.0);
          const double gap = std::abs(loss - target);
          if (!best || gap < best_gap) {
            best = row;
            best_gap = gap;
          }
          if (gap <= config.loss_tolerance_pp) break;
          (loss > target ? lo : hi) = theta;
        }
        if (best_gap > config.loss_tolerance_pp) {
          log_warning("blacklist threshold search for " + num(target) +
                      "% good loss at size cap " + size_cap_to_string(cap) +
                      " ended " + num(best_gap) + " points away");
        }
        rows.push_back(*best);
        report(progress, describe(rows.back()) + " cap=" + size_cap_to_string(cap) +
                             " target=" + num(target) + "%");
      }
    }
  }
  auto curve = run_threshold_curve(config, state, snapshot_id, progress);
  rows.insert(rows.end(), curve.begin(), curve.end());
  return rows;
}

std::vector<ImpactRow> run_evolve(const ExperimentConfig& config, NetworkState state,
                                  std::uint64_t seed, const std::string& snapshot_id,
                                  const Progress& progress) {
  if (state.agent_count() > config.n_agents) {
    throw ConfigError("evolve start state is larger than n_agents");
  }
  state.rng() = Rng(derive_seed(seed, kEvolveTag));
  PolicySpec spec = config.policy;
  spec.kind = PolicyKind::blacklist;
  spec.blacklist_threshold = config.evolve_theta;
  spec.size_cap = config.evolve_size_cap;
  const auto strategy = SelectionStrategy::top_k(config.top_k);
  const TrafficOptions options = traffic_options(config, 0);
  const Step period = state.params().traffic_period;

  std::vector<ImpactRow> rows;
  PolicyAssignment policy;
  std::size_t runs = 0;
  while (state.agent_count() < config.n_agents) {
    if ((state.step() + 1) % period == 0) {
      policy = make_assignment(top_k_by_degree(state, config.top_k), spec);
    }
    const auto run = growth_step(state, policy, options);
    if (!run) continue;
    if (runs++ % config.evolve_record_every != 0) continue;
    TrafficOptions paired = options;
    paired.tie_seed = run->tie_seed;
    const TrafficReport baseline = compute_traffic(state, {}, paired);
    const RowBase base{"evolve", seed, state.agent_count(), snapshot_id};
    rows.push_back(make_row(base, spec, strategy, baseline, run->report));
    report(progress, describe(rows.back()) + " n=" + std::to_string(state.agent_count()));
  }
  return rows;
}

std::vector<MetricRow> run_metrics(const ExperimentConfig& config,
                                   const NetworkState& state) {
  std::vector<MetricRow> rows;
  const DegreeStats degrees = degree_stats(state);
  rows.push_back({"n_agents", 0.0, static_cast<double>(state.agent_count())});
  rows.push_back({"links", 0.0, static_cast<double>(state.link_count())});
  rows.push_back({"mean_degree", 0.0, degrees.mean});
  rows.push_back({"connected", 0.0, is_connected(state) ? 1.0 : 0.0});
  double rate_sum = 0.0;
  for (const Agent& a : state.agents()) rate_sum += a.wickedness_rate;
  rows.push_back({"mean_wickedness_rate", 0.0,
                  rate_sum / static_cast<double>(state.agent_count())});
  for (const CcdfPoint& p : degrees.ccdf) rows.push_back({"degree_ccdf", p.x, p.fraction});
  const std::uint64_t seed = config.seeds.front();
  for (const CcdfPoint& p : path_length_ccdf(state, config.path_pairs, seed)) {
    rows.push_back({"path_length_ccdf", p.x, p.fraction});
  }
  for (const CcdfPoint& p : wickedness_ccdf(state, config.wickedness_bins)) {
    rows.push_back({"wickedness_ccdf", p.x, p.fraction});
  }
  return rows;
}

}  // namespace asim
