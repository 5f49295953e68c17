// Copyright 2026 The Benthos Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "benthos/grid.hpp"

namespace benthos {

struct OpNode {
  int id = -1;
  Vec2 position;
  double reward = 0.0;
};

struct OpParams {
  double grasp_alpha = 0.3;   // candidate-list width of the randomized greedy
  int max_stale_iters = 200;  // stop after this many non-improving ILS rounds
  int max_total_iters = 1000;
  double time_cap_s = 0.0;    // wall-clock cap; <= 0 disables (deterministic)
  std::uint64_t seed = 0;
};

/// An open route: ordered indices into the input node list, walked from a
/// fixed start position. `length` includes the start-to-first-node leg.
struct OpRoute {
  std::vector<int> order;
  double reward = 0.0;
  double length = 0.0;
};

/// Total Euclidean length start -> nodes[order[0]] -> ... -> last.
double route_length(const std::vector<OpNode>& nodes, const Vec2& start,
                    const std::vector<int>& order);

double route_reward(const std::vector<OpNode>& nodes,
                    const std::vector<int>& order);

/// Deterministic ratio-greedy construction followed by local search; the
/// quality floor every solve_op result must dominate.
OpRoute greedy_route(const std::vector<OpNode>& nodes, const Vec2& start,
                     double d_budget);

/// Budgeted orienteering: maximize collected reward subject to
/// route_length <= d_budget. Iterated local search over
/// {insert, remove, 2-opt, or-opt} moves with randomized-greedy restarts
/// and random segment-removal perturbation. Deterministic for a fixed
/// seed when the time cap is disabled; never returns a route worse than
/// the greedy construction.
OpRoute solve_op(const std::vector<OpNode>& nodes, const Vec2& start,
                 double d_budget, const OpParams& params);

}  // namespace benthos
