// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "asim/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>

#include "asim/errors.hpp"

namespace asim {
namespace {

constexpr std::pair<Scenario, std::string_view> kScenarioNames[] = {
    {Scenario::grow, "grow"},
    {Scenario::instant, "instant"},
    {Scenario::participation, "participation"},
    {Scenario::efficacy_grid, "efficacy_grid"},
    {Scenario::blacklist_tradeoff, "blacklist_tradeoff"},
    {Scenario::blacklist_threshold_curve, "blacklist_threshold_curve"},
    {Scenario::evolve, "evolve"},
    {Scenario::metrics, "metrics"},
};

std::string_view trim(std::string_view s) {
  const auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && space(s.front())) s.remove_prefix(1);
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
    throw ConfigError("bad value for " + std::string(key) + ": '" +
                      std::string(text) + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_numbers(std::string_view key, std::string_view text) {
  std::vector<T> out;
  for (auto item : split_list(text)) out.push_back(parse_number<T>(key, item));
  return out;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  throw ConfigError("bad value for " + std::string(key) + ": '" +
                    std::string(text) + "'");
}

TransitFiltering parse_filtering(std::string_view text) {
  if (text == "compounding") return TransitFiltering::compounding;
  if (text == "once_per_path" || text == "once-per-path") {
    return TransitFiltering::once_per_path;
  }
  throw ConfigError("unknown transit filtering '" + std::string(text) + "'");
}

using Setter = std::function<void(ExperimentConfig&, std::string_view, std::string_view)>;

template <typename T, typename Field>
Setter number(Field field) {
  return [field](ExperimentConfig& c, std::string_view key, std::string_view v) {
    std::invoke(field, c) = parse_number<T>(key, v);
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"model.av_degree", number<double>([](auto& c) -> auto& { return c.model.av_degree; })},
      {"model.extent_cost", number<double>([](auto& c) -> auto& { return c.model.extent_cost; })},
      {"model.base_income", number<double>([](auto& c) -> auto& { return c.model.base_income; })},
      {"model.pop_distr_exp", number<double>([](auto& c) -> auto& { return c.model.pop_distr_exp; })},
      {"model.wickedness", number<double>([](auto& c) -> auto& { return c.model.avg_wickedness; })},
      {"model.traffic_period", number<Step>([](auto& c) -> auto& { return c.model.traffic_period; })},
      {"model.income_coeff", number<double>([](auto& c) -> auto& { return c.model.income_coeff; })},
      {"model.link_retry_factor", number<double>([](auto& c) -> auto& { return c.model.link_retry_factor; })},
      {"model.extent_upkeep", number<double>([](auto& c) -> auto& { return c.model.extent_upkeep; })},
      {"model.shared_population", [](auto& c, auto key, auto v) { c.model.shared_population = parse_bool(key, trim(v)); }},
      {"grid.width", number<std::size_t>([](auto& c) -> auto& { return c.grid.width; })},
      {"grid.height", number<std::size_t>([](auto& c) -> auto& { return c.grid.height; })},
      {"grid.total_population", number<std::uint64_t>([](auto& c) -> auto& { return c.grid.total_population; })},
      {"grid.seed", number<std::uint64_t>([](auto& c) -> auto& { return c.grid.seed; })},
      {"scenario.kind", [](auto& c, auto, auto v) { c.scenario = parse_scenario(trim(v)); }},
      {"scenario.n_agents", number<std::size_t>([](auto& c) -> auto& { return c.n_agents; })},
      {"scenario.evolve_start", number<std::size_t>([](auto& c) -> auto& { return c.evolve_start; })},
      {"scenario.evolve_record_every", number<std::size_t>([](auto& c) -> auto& { return c.evolve_record_every; })},
      {"scenario.evolve_theta", number<double>([](auto& c) -> auto& { return c.evolve_theta; })},
      {"scenario.evolve_size_cap", [](auto& c, auto, auto v) { c.evolve_size_cap = parse_size_cap(trim(v)); }},
      {"scenario.fractions", [](auto& c, auto k, auto v) { c.fractions = parse_numbers<double>(k, v); }},
      {"scenario.efficacy_max", number<double>([](auto& c) -> auto& { return c.efficacy_max; })},
      {"scenario.efficacy_step", number<double>([](auto& c) -> auto& { return c.efficacy_step; })},
      {"scenario.loss_targets", [](auto& c, auto k, auto v) { c.loss_targets = parse_numbers<double>(k, v); }},
      {"scenario.size_caps",
       [](auto& c, auto, auto v) {
         c.size_caps.clear();
         for (auto item : split_list(v)) c.size_caps.push_back(parse_size_cap(item));
       }},
      {"scenario.loss_tolerance_pp", number<double>([](auto& c) -> auto& { return c.loss_tolerance_pp; })},
      {"scenario.search_iterations", number<std::size_t>([](auto& c) -> auto& { return c.search_iterations; })},
      {"scenario.theta_step", number<double>([](auto& c) -> auto& { return c.theta_step; })},
      {"scenario.theta_max", number<double>([](auto& c) -> auto& { return c.theta_max; })},
      {"scenario.curve_size_cap", [](auto& c, auto, auto v) { c.curve_size_cap = parse_size_cap(trim(v)); }},
      {"scenario.path_pairs", number<std::size_t>([](auto& c) -> auto& { return c.path_pairs; })},
      {"scenario.wickedness_bins", number<std::size_t>([](auto& c) -> auto& { return c.wickedness_bins; })},
      {"policy.kind",
       [](auto& c, auto, auto v) {
         c.policy_kinds.clear();
         for (auto item : split_list(v)) c.policy_kinds.push_back(parse_policy_kind(item));
       }},
      {"policy.e_in", number<double>([](auto& c) -> auto& { return c.policy.e_in; })},
      {"policy.e_out", number<double>([](auto& c) -> auto& { return c.policy.e_out; })},
      {"policy.theta", number<double>([](auto& c) -> auto& { return c.policy.blacklist_threshold; })},
      {"policy.size_cap", [](auto& c, auto, auto v) { c.policy.size_cap = parse_size_cap(trim(v)); }},
      {"strategy",
       [](auto& c, auto, auto v) {
         c.strategies.clear();
         for (auto item : split_list(v)) c.strategies.push_back(parse_strategy(item));
       }},
      {"strategy.k", number<std::size_t>([](auto& c) -> auto& { return c.top_k; })},
      {"traffic.transit_filtering", [](auto& c, auto, auto v) { c.transit_filtering = parse_filtering(trim(v)); }},
      {"traffic.workers", number<unsigned>([](auto& c) -> auto& { return c.workers; })},
      {"seeds", [](auto& c, auto k, auto v) { c.seeds = parse_numbers<std::uint64_t>(k, v); }},
      {"snapshot", [](auto& c, auto, auto v) { c.snapshot = std::filesystem::path(trim(v)); }},
      {"out", [](auto& c, auto, auto v) { c.out = std::filesystem::path(trim(v)); }},
  };
  return table;
}

}  // namespace

std::string_view to_string(Scenario s) {
  for (const auto& [value, name] : kScenarioNames) {
    if (value == s) return name;
  }
  return "unknown";
}

Scenario parse_scenario(std::string_view text) {
  std::string name(text);
  for (char& c : name) {
    if (c == '-') c = '_';
  }
  for (const auto& [value, known] : kScenarioNames) {
    if (known == name) return value;
  }
  throw ConfigError("unknown scenario '" + std::string(text) + "'");
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown key '" + std::string(key) + "'");
  try {
    it->second(*this, key, trim(value));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

void ExperimentConfig::validate() const {
  model.validate();
  if (grid.width == 0 || grid.height == 0) throw ConfigError("grid must have area >= 1");
  if (grid.total_population < grid.width * grid.height) {
    throw ConfigError("grid.total_population must be >= grid area");
  }
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (policy_kinds.empty()) throw ConfigError("at least one policy kind is required");
  if (strategies.empty()) throw ConfigError("at least one strategy is required");
  for (const auto& s : strategies) s.validate();
  for (const auto& spec : policy_specs()) spec.validate();
  if (top_k == 0) throw ConfigError("strategy.k must be >= 1");
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("fractions must lie in [0, 1]");
  }
  if (!(efficacy_step > 0.0) || !(efficacy_max >= 0.0 && efficacy_max <= 1.0)) {
    throw ConfigError("efficacy grid needs step > 0 and max in [0, 1]");
  }
  for (double t : loss_targets) {
    if (!(t > 0.0 && t < 100.0)) throw ConfigError("loss targets must lie in (0, 100)");
  }
  if (!(loss_tolerance_pp > 0.0)) throw ConfigError("loss tolerance must be > 0");
  if (!(theta_step > 0.0) || !(theta_max > 0.0 && theta_max <= 0.5)) {
    throw ConfigError("theta sweep needs step > 0 and max in (0, 0.5]");
  }
  if (wickedness_bins == 0) throw ConfigError("wickedness bins must be >= 1");
  if (evolve_record_every == 0) throw ConfigError("evolve_record_every must be >= 1");
  if (!(evolve_theta >= 0.0 && evolve_theta <= 0.5)) {
    throw ConfigError("evolve_theta must lie in [0, 0.5]");
  }
  if (scenario == Scenario::evolve && evolve_start > n_agents) {
    throw ConfigError("evolve_start exceeds n_agents");
  }
}

std::vector<PolicySpec> ExperimentConfig::policy_specs() const {
  std::vector<PolicySpec> out;
  for (PolicyKind kind : policy_kinds) {
    PolicySpec spec = policy;
    spec.kind = kind;
    out.push_back(spec);
  }
  return out;
}

std::pair<std::string, std::string> split_setting(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("expected key=value, got '" + std::string(text) + "'");
  }
  return {std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1)))};
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    try {
      const auto [key, value] = split_setting(view);
      base.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  return parse_config(in, std::move(base));
}

}  // namespace asim
