// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "asim/network.hpp"

namespace asim {

inline constexpr int kSnapshotVersion = 1;

/// Serializes the complete state. The layout, one record per line:
///
///   ASIM-SNAPSHOT <version>
///   params av_degree=<r> extent_cost=<r> base_income=<r> pop_distr_exp=<r>
///          wickedness=<r> traffic_period=<n> income_coeff=<r>
///          link_retry_factor=<r> extent_upkeep=<r>
///          shared_population=<0|1>                     (one line)
///   step <n>
///   grid <width> <height>
///   rng <mt19937_64 state words>
///   agents <count>
///   loc <id> <population> <k> <occupant_1> ... <occupant_k>   (every cell)
///   agent <id> <created_at> <money> <wickedness_rate> <transit_share>
///         <m> <location_1> ... <location_m> <j> <link_1> ... <link_j>
///   checksum <fnv1a64 of every preceding byte, 16 lowercase hex digits>
///
/// Reals use the shortest representation that parses back to the same double,
/// so load(save(s)) == s bit for bit. Occupants keep arrival order.
std::string snapshot_text(const NetworkState& state);

void save_snapshot(const NetworkState& state, std::ostream& out);
void save_snapshot(const NetworkState& state, const std::filesystem::path& path);

/// Throws SnapshotError on a bad magic/version, truncation, checksum mismatch
/// or malformed record, and StructuralError if the decoded state violates a
/// network invariant.
NetworkState parse_snapshot(std::string_view text);
NetworkState load_snapshot(std::istream& in);
NetworkState load_snapshot(const std::filesystem::path& path);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Checksum recorded in a snapshot's trailer, as 16 hex digits.
std::string snapshot_id(std::string_view text);

}  // namespace asim
