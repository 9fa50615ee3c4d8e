// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "asim/rng.hpp"

#include <limits>
#include <sstream>

#include "asim/errors.hpp"

namespace asim {

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw PreconditionError("uniform_below: bound must be > 0");
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::string Rng::state() const {
  std::ostringstream out;
  out << engine_;
  return out.str();
}

void Rng::set_state(const std::string& text) {
  std::istringstream in(text);
  std::mt19937_64 engine;
  in >> engine;
  if (in.fail()) throw SnapshotError("unreadable RNG state");
  engine_ = engine;
}

}  // namespace asim
