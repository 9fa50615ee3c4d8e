// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "asim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "asim/errors.hpp"

namespace asim {

PopulationGrid::PopulationGrid(std::uint32_t width, std::uint32_t height,
                               std::vector<std::uint64_t> populations)
    : width_(width), height_(height), populations_(std::move(populations)) {
  const std::uint64_t area = std::uint64_t{width} * height;
  if (area == 0) throw ConfigError("grid must have at least one location");
  if (populations_.size() != area) {
    throw ConfigError("grid population count " +
                      std::to_string(populations_.size()) +
                      " does not match area " + std::to_string(area));
  }
  cumulative_.resize(populations_.size());
  std::inclusive_scan(populations_.begin(), populations_.end(),
                      cumulative_.begin());
  if (cumulative_.back() == 0) {
    throw ConfigError("grid total population must be positive");
  }
  populated_count_ = static_cast<std::size_t>(
      std::count_if(populations_.begin(), populations_.end(),
                    [](std::uint64_t p) { return p > 0; }));
}

std::uint64_t PopulationGrid::population(LocationId loc) const {
  if (loc >= populations_.size()) {
    throw LookupError("location " + std::to_string(loc) + " outside grid");
  }
  return populations_[loc];
}

PopulationGrid build_grid(std::uint32_t width, std::uint32_t height,
                          double exponent, std::uint64_t total_population,
                          std::uint64_t seed) {
  const std::uint64_t area = std::uint64_t{width} * height;
  if (area == 0) throw ConfigError("grid must have at least one location");
  if (!(exponent <= 0.0)) throw ConfigError("population exponent must be <= 0");
  if (total_population < area) {
    throw ConfigError("total population must be at least the grid area");
  }

  const std::size_t n = static_cast<std::size_t>(area);
  std::vector<double> weight(n);
  for (std::size_t k = 0; k < n; ++k) {
    weight[k] = std::pow(static_cast<double>(k + 1), exponent);
  }
  // Sum smallest-first for accuracy.
  const double weight_sum = std::accumulate(weight.rbegin(), weight.rend(), 0.0);

  // Largest-remainder apportionment over ranks.
  std::vector<std::uint64_t> by_rank(n);
  std::vector<double> remainder(n);
  std::uint64_t assigned = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double quota =
        static_cast<double>(total_population) * weight[k] / weight_sum;
    const double floor_q = std::floor(quota);
    by_rank[k] = static_cast<std::uint64_t>(floor_q);
    remainder[k] = quota - floor_q;
    assigned += by_rank[k];
  }
  // Floating error can overshoot by a unit or two on huge totals.
  while (assigned > total_population) {
    auto it = std::find_if(by_rank.rbegin(), by_rank.rend(),
                           [](std::uint64_t p) { return p > 0; });
    --*it;
    --assigned;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return remainder[a] > remainder[b];
                   });
  for (std::size_t i = 0; assigned < total_population; i = (i + 1) % n) {
    ++by_rank[order[i]];
    ++assigned;
  }

  // Fisher-Yates permutation of cells.
  Rng rng(seed);
  std::vector<std::size_t> cell(n);
  std::iota(cell.begin(), cell.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_below(i));
    std::swap(cell[i - 1], cell[j]);
  }

  std::vector<std::uint64_t> populations(n);
  for (std::size_t k = 0; k < n; ++k) populations[cell[k]] = by_rank[k];
  return PopulationGrid(width, height, std::move(populations));
}

LocationId sample_location(const PopulationGrid& grid, Rng& rng) {
  const auto cumulative = grid.cumulative_weights();
  const std::uint64_t target = rng.uniform_below(grid.total_population());
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  return static_cast<LocationId>(it - cumulative.begin());
}

LocationId sample_location(const PopulationGrid& grid,
                           std::span<const LocationId> restrict, Rng& rng) {
  if (restrict.empty()) {
    throw PreconditionError("sample_location: restriction set is empty");
  }
  std::uint64_t total = 0;
  for (LocationId loc : restrict) {
    if (loc >= grid.size()) {
      throw PreconditionError("sample_location: location " +
                              std::to_string(loc) + " outside grid");
    }
    total += grid.population(loc);
  }
  if (total == 0) {
    throw SamplingError("sample_location: eligible locations are unpopulated");
  }
  std::uint64_t target = rng.uniform_below(total);
  for (LocationId loc : restrict) {
    const std::uint64_t p = grid.population(loc);
    if (target < p) return loc;
    target -= p;
  }
  return restrict.back();  // unreachable
}

}  // namespace asim
