// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

// asim: grow networks, run intervention experiments, emit CSV.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "asim/config.hpp"
#include "asim/errors.hpp"
#include "asim/experiment.hpp"
#include "asim/snapshot.hpp"

namespace {

struct Flags {
  std::string config;
  std::string snapshot;
  std::string out;
  std::vector<std::uint64_t> seeds;
  std::optional<unsigned> workers;
  std::vector<std::string> settings;
  std::optional<std::size_t> n_agents;
  std::optional<std::size_t> start;
  std::optional<std::size_t> record_every;
  std::string policy;
  std::string strategy;
  std::optional<double> e_in, e_out, theta;
  std::string size_cap;
  std::optional<std::size_t> pairs;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key=value config file");
  cmd->add_option("--snapshot", f.snapshot, "snapshot to start from");
  cmd->add_option("--out", f.out, "output path (CSV, or snapshot for grow)");
  cmd->add_option("--seed", f.seeds, "seed; repeat for several");
  cmd->add_option("--workers", f.workers, "traffic worker threads (0 = all cores)");
  cmd->add_option("--set", f.settings, "override a config key, key=value");
  cmd->add_flag("--quiet,-q", f.quiet, "no progress on stderr");
}

asim::ExperimentConfig build_config(asim::Scenario scenario, const Flags& f) {
  asim::ExperimentConfig c;
  if (!f.config.empty()) c = asim::load_config(f.config);
  c.scenario = scenario;
  for (const auto& s : f.settings) {
    const auto [key, value] = asim::split_setting(s);
    c.set(key, value);
  }
  if (!f.snapshot.empty()) c.snapshot = f.snapshot;
  if (!f.out.empty()) c.out = f.out;
  if (!f.seeds.empty()) c.seeds = f.seeds;
  if (f.workers) c.workers = *f.workers;
  if (f.n_agents) c.n_agents = *f.n_agents;
  if (f.start) c.evolve_start = *f.start;
  if (f.record_every) c.evolve_record_every = *f.record_every;
  if (!f.policy.empty()) c.set("policy.kind", f.policy);
  if (!f.strategy.empty()) c.set("strategy", f.strategy);
  if (f.e_in) c.policy.e_in = *f.e_in;
  if (f.e_out) c.policy.e_out = *f.e_out;
  const bool evolve = scenario == asim::Scenario::evolve;
  if (f.theta) (evolve ? c.evolve_theta : c.policy.blacklist_threshold) = *f.theta;
  if (!f.size_cap.empty()) {
    c.set(evolve ? "scenario.evolve_size_cap" : "policy.size_cap", f.size_cap);
  }
  if (f.pairs) c.path_pairs = *f.pairs;
  c.validate();
  return c;
}

asim::NetworkState require_snapshot(const asim::ExperimentConfig& c, std::string& id) {
  if (!c.snapshot) throw asim::ConfigError("this command needs --snapshot");
  asim::NetworkState state = asim::load_snapshot(*c.snapshot);
  id = asim::snapshot_id(asim::snapshot_text(state));
  return state;
}

// Writes to c.out, or stdout when no path was given.
template <typename Write>
void emit(const asim::ExperimentConfig& c, Write&& write) {
  if (!c.out) {
    write(std::cout);
    return;
  }
  std::ofstream out(*c.out);
  if (!out) throw std::runtime_error("cannot write " + c.out->string());
  write(out);
  if (!out.flush()) throw std::runtime_error("write failed for " + c.out->string());
}

void emit_rows(const asim::ExperimentConfig& c, const std::vector<asim::ImpactRow>& rows) {
  emit(c, [&](std::ostream& o) { asim::write_impact_csv(o, rows); });
  if (c.out && c.seeds.size() > 1) {
    auto path = *c.out;
    path.replace_extension(".summary.csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    asim::write_summary_csv(out, rows);
  }
}

int run(asim::Scenario scenario, const Flags& f) {
  const asim::ExperimentConfig c = build_config(scenario, f);
  asim::Progress progress;
  if (!f.quiet) progress = [](const std::string& line) { std::cerr << "asim: " << line << '\n'; };

  std::string id;
  switch (scenario) {
    case asim::Scenario::grow: {
      if (!c.out) throw asim::ConfigError("grow needs --out for the snapshot");
      const auto state = asim::grow_network(c, c.seeds.front(), c.n_agents, progress);
      asim::save_snapshot(state, *c.out);
      if (progress) {
        progress("wrote " + c.out->string() + " (" + std::to_string(state.agent_count()) +
                 " agents, mean degree " + std::to_string(state.mean_degree()) + ")");
      }
      return 0;
    }
    case asim::Scenario::instant: {
      const auto state = require_snapshot(c, id);
      emit_rows(c, asim::run_instant(c, state, id, progress));
      return 0;
    }
    case asim::Scenario::participation: {
      const auto state = require_snapshot(c, id);
      emit_rows(c, asim::run_participation(c, state, id, progress));
      return 0;
    }
    case asim::Scenario::efficacy_grid: {
      const auto state = require_snapshot(c, id);
      emit_rows(c, asim::run_efficacy_grid(c, state, id, progress));
      return 0;
    }
    case asim::Scenario::blacklist_tradeoff: {
      const auto state = require_snapshot(c, id);
      emit_rows(c, asim::run_blacklist_tradeoff(c, state, id, progress));
      return 0;
    }
    case asim::Scenario::blacklist_threshold_curve: {
      const auto state = require_snapshot(c, id);
      emit_rows(c, asim::run_threshold_curve(c, state, id, progress));
      return 0;
    }
    case asim::Scenario::evolve: {
      std::vector<asim::ImpactRow> rows;
      for (std::uint64_t seed : c.seeds) {
        std::optional<asim::NetworkState> start;
        if (c.snapshot) {
          start = require_snapshot(c, id);
        } else {
          start = asim::grow_network(c, seed, c.evolve_start, progress);
          id = asim::snapshot_id(asim::snapshot_text(*start));
        }
        auto part = asim::run_evolve(c, std::move(*start), seed, id, progress);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      emit_rows(c, rows);
      return 0;
    }
    case asim::Scenario::metrics: {
      const auto state = require_snapshot(c, id);
      const auto rows = asim::run_metrics(c, state);
      emit(c, [&](std::ostream& o) { asim::write_metric_csv(o, rows, id); });
      return 0;
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based AS-level Internet model with malware interventions"};
  app.require_subcommand(1);
  Flags f;

  struct Command {
    const char* name;
    asim::Scenario scenario;
    const char* help;
  };
  const Command commands[] = {
      {"grow", asim::Scenario::grow, "grow a network from empty and save a snapshot"},
      {"instant", asim::Scenario::instant, "one paired traffic run per policy, strategy and seed"},
      {"participation", asim::Scenario::participation, "sweep the participating share of the top agents"},
      {"efficacy-grid", asim::Scenario::efficacy_grid, "sweep ingress and egress filter efficacy"},
      {"blacklist-tradeoff", asim::Scenario::blacklist_tradeoff, "blacklist thresholds for good-loss targets"},
      {"blacklist-curve", asim::Scenario::blacklist_threshold_curve, "dense blacklist threshold sweep"},
      {"evolve", asim::Scenario::evolve, "grow under blacklisting with paired baselines"},
      {"metrics", asim::Scenario::metrics, "degree, path-length and wickedness distributions"},
  };
  std::vector<std::pair<CLI::App*, asim::Scenario>> subs;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_common(sub, f);
    subs.emplace_back(sub, cmd.scenario);
    switch (cmd.scenario) {
      case asim::Scenario::grow:
        sub->add_option("--n-agents", f.n_agents, "network size");
        break;
      case asim::Scenario::instant:
        sub->add_option("--policy", f.policy, "policy kinds, comma separated");
        sub->add_option("--strategy", f.strategy, "strategies, e.g. top_k:20,random_fraction:0.3");
        [[fallthrough]];
      case asim::Scenario::participation:
      case asim::Scenario::efficacy_grid:
        sub->add_option("--e-in", f.e_in, "ingress efficacy");
        sub->add_option("--e-out", f.e_out, "egress efficacy");
        break;
      case asim::Scenario::evolve:
        sub->add_option("--n-agents", f.n_agents, "final network size");
        sub->add_option("--start", f.start, "size at which blacklisting starts");
        sub->add_option("--record-every", f.record_every, "pair every n-th traffic run");
        [[fallthrough]];
      case asim::Scenario::blacklist_tradeoff:
      case asim::Scenario::blacklist_threshold_curve:
        sub->add_option("--theta", f.theta, "blacklist threshold");
        sub->add_option("--size-cap", f.size_cap, "blacklist size cap or 'unlimited'");
        break;
      case asim::Scenario::metrics:
        sub->add_option("--pairs", f.pairs, "sampled path pairs, 0 = all");
        break;
    }
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [sub, scenario] : subs) {
      if (sub->parsed()) return run(scenario, f);
    }
  } catch (const std::exception& e) {
    std::cerr << "asim: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
