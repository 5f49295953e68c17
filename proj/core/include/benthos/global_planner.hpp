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

#include <string>
#include <vector>

#include "benthos/belief.hpp"
#include "benthos/gp.hpp"
#include "benthos/orienteering.hpp"
#include "benthos/sensors.hpp"
#include "benthos/spatial_graph.hpp"

namespace benthos {

struct GlobalPlannerConfig {
  double macro_size = 4.0;  // meters
  double micro_size = 2.0;  // meters
  double h_split = 0.35;    // nats; macro regions below this mean entropy split
  double beta = 0.6;        // UCB exploration weight
  double c_factor = 6.0;    // time <-> distance budget conversion
  GpConfig gp;
  // Mission-scale ILS budget: only the first route node is ever executed
  // (receding horizon), so deep tail refinement buys nothing. The solver
  // library default (200 stale iterations) remains for standalone use.
  OpParams op = [] {
    OpParams p;
    p.max_stale_iters = 40;
    p.max_total_iters = 160;
    return p;
  }();
};

/// Strategic directive handed to the local planner: the next target region
/// and the tactical time budget for reaching and working it.
struct GlobalDirective {
  int node_id = -1;
  Vec2 target;     // node centroid
  Rect region;     // HasReached fires when the robot enters this rectangle
  double t_local = 0.0;  // seconds, in (0, t_rem]
  bool fallback = false; // true when the OP route was empty
};

/// Per-call planning record, appended to the mission log for solve-time
/// and route analysis. `solve_ms` is measured wall time and is excluded
/// from the determinism digest.
struct GlobalPlanRecord {
  double t = 0.0;
  int n_nodes = 0;
  int n_micro = 0;
  int n_splits = 0;
  double d_budget = 0.0;
  double route_reward = 0.0;
  double route_length = 0.0;
  int route_size = 0;
  int chosen_node = -1;
  double t_local = 0.0;
  bool fallback = false;
  std::string cause;  // start | reached | stall
  double solve_ms = 0.0;
};

/// Eq.-style composite node score: (mu + beta * sigma) * area_weight for
/// unvisited nodes, exactly zero for visited ones. Order matches
/// graph.nodes().
std::vector<double> node_rewards(const SpatialGraph& graph,
                                 const GpModel& model, double beta);

/// One event-triggered strategic planning call: refine the graph against
/// the belief, refresh micro-node statistics, regress the reward field,
/// and solve the budgeted orienteering problem. Mutates `graph` (splits,
/// refreshed statistics). `op_seed` feeds the ILS; pass a per-mission
/// substream for reproducibility.
GlobalDirective plan_global(const RobotState& state, const BeliefState& belief,
                            SpatialGraph& graph, double t_rem, double dt,
                            const GlobalPlannerConfig& cfg,
                            std::uint64_t op_seed,
                            GlobalPlanRecord* record = nullptr);

}  // namespace benthos
