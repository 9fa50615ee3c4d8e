// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

// Hand-built states for worked examples.

#pragma once

#include <utility>
#include <vector>

#include "asim/network.hpp"

namespace asim::testing {

inline NetworkState empty_state(std::vector<std::uint64_t> pops,
                                ModelParams params = {}, std::uint64_t seed = 1) {
  const auto w = static_cast<std::uint32_t>(pops.size());
  return NetworkState(PopulationGrid(w, 1, std::move(pops)), params, seed);
}

// Line A-B-C, every agent serving 100: cells {50,100,100,50} with A on
// {0,1}, B on {1,2}, C on {2,3}.
inline NetworkState line3(double wa = 0.5, double wb = 0.0, double wc = 0.0) {
  NetworkState s = empty_state({50, 100, 100, 50});
  s.add_agent(0, wa);
  s.add_location(0, 1);
  s.add_agent(1, wb);
  s.add_location(1, 2);
  s.add_agent(2, wc);
  s.add_location(2, 3);
  s.add_link(0, 1);
  s.add_link(1, 2);
  return s;
}

// Square A-B-C-D-A: A=0, B=1, C=2, D=3. A and C are two hops apart by
// either B or D.
inline NetworkState square() {
  NetworkState s = empty_state({100, 100, 100, 100});
  s.add_agent(0, 0.0);
  s.add_location(0, 1);
  s.add_agent(1, 0.0);
  s.add_location(1, 2);
  s.add_agent(2, 0.0);
  s.add_location(2, 3);
  s.add_agent(3, 0.0);
  s.add_location(3, 0);
  s.add_link(0, 1);
  s.add_link(1, 2);
  s.add_link(2, 3);
  s.add_link(3, 0);
  return s;
}

// Hub 0 with `leaves` spokes, everyone on one cell.
inline NetworkState star(std::size_t leaves, std::uint64_t pop = 600) {
  NetworkState s = empty_state({pop});
  s.add_agent(0, 0.0);
  for (std::size_t i = 0; i < leaves; ++i) {
    const AgentId leaf = s.add_agent(0, 0.0);
    s.add_link(0, leaf);
  }
  return s;
}

}  // namespace asim::testing
