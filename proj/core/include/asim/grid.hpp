// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asim/rng.hpp"

namespace asim {

using LocationId = std::uint32_t;

/// Immutable two-dimensional lattice of populated locations.
///
/// Locations are numbered row-major. Cumulative weights back O(log n)
/// population-weighted sampling.
class PopulationGrid {
 public:
  /// Validates that `populations` has `width * height` entries with a positive
  /// total. Throws ConfigError otherwise.
  PopulationGrid(std::uint32_t width, std::uint32_t height,
                 std::vector<std::uint64_t> populations);

  std::uint32_t width() const { return width_; }
  std::uint32_t height() const { return height_; }
  std::size_t size() const { return populations_.size(); }

  std::uint64_t population(LocationId loc) const;
  std::span<const std::uint64_t> populations() const { return populations_; }
  std::uint64_t total_population() const { return cumulative_.back(); }
  std::span<const std::uint64_t> cumulative_weights() const {
    return cumulative_;
  }
  /// Number of locations with population > 0.
  std::size_t populated_count() const { return populated_count_; }

  friend bool operator==(const PopulationGrid&, const PopulationGrid&) =
      default;

 private:
  std::uint32_t width_;
  std::uint32_t height_;
  std::vector<std::uint64_t> populations_;
  std::vector<std::uint64_t> cumulative_;
  std::size_t populated_count_ = 0;
};

/// Zipf-like population over a seed-determined permutation of cells: the k-th
/// cell of the permutation gets a share proportional to k^exponent, apportioned
/// by largest remainder so the populations sum to `total_population` exactly.
PopulationGrid build_grid(std::uint32_t width, std::uint32_t height,
                          double exponent, std::uint64_t total_population,
                          std::uint64_t seed);

/// Draws a location with probability proportional to its population.
LocationId sample_location(const PopulationGrid& grid, Rng& rng);

/// Draws from `restrict` only, weighted by population. Throws
/// PreconditionError on an empty or out-of-grid set, SamplingError when every
/// eligible location is unpopulated.
LocationId sample_location(const PopulationGrid& grid,
                           std::span<const LocationId> restrict, Rng& rng);

}  // namespace asim
