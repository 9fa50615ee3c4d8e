// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace asim {

/// Invalid model, grid or experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke an operation's documented precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Unknown agent or location id.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// The graph or occupancy structure would be (or is) inconsistent.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Weighted sampling over an eligible set with zero total weight.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed, truncated or corrupted snapshot.
class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace asim
