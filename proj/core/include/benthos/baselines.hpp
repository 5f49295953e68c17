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

// Reference planners sharing the sensing and belief stack: exhaustive
// boustrophedon coverage and a receding-horizon UCT search.

#include <cstdint>
#include <vector>

#include "benthos/belief.hpp"
#include "benthos/proxy_dynamics.hpp"
#include "benthos/rng.hpp"

namespace benthos {

struct LawnmowerPlan {
  std::vector<Vec2> waypoints;
  double spacing = 1.0;
};

/// North-south transects spaced `spacing` apart with half-spacing margins,
/// alternating direction so consecutive lanes connect at the ends.
LawnmowerPlan make_lawnmower_plan(const GridSpec& spec, double spacing);

/// Transect-tracking controller: steers along the segment between
/// consecutive waypoints with a cross-track correction term (plain
/// bearing-to-waypoint control leaves a lateral offset standing for meters
/// after each turn, which breaks zero-overlap swath coverage). Surge is
/// scaled by the heading-error cosine (never negative) and slowed inside
/// the approach radius so the arrival ball cannot be jumped over.
class BoustrophedonController {
 public:
  BoustrophedonController(LawnmowerPlan plan, double v_max, double omega_max);

  Control next_control(const RobotState& state);
  bool finished() const { return next_ >= plan_.waypoints.size(); }
  std::size_t waypoint_index() const { return next_; }

  double arrival_tol = 0.1;     // meters
  double slow_radius = 1.0;     // meters
  double heading_gain = 2.5;    // rad/s per rad
  double cross_track_gain = 2.5;  // rad per meter of lateral offset

 private:
  LawnmowerPlan plan_;
  double v_max_;
  double omega_max_;
  std::size_t next_ = 0;
  Vec2 leg_start_;
  bool leg_started_ = false;
};

struct MctsConfig {
  double v = 0.5;        // m/s, action-set linear speed
  double omega = 1.0;    // rad/s, action-set yaw rate
  double dt = 0.5;
  int rollout_depth = 20;
  double discount = 0.95;
  double c_uct = 1.0;
  int n_sims = 400;        // fixed-simulation-count mode (deterministic)
  double time_cap_s = 0.0; // > 0 switches to a wall-clock budget
  double info_bonus = 0.1;
  int pooling = 4;

  /// The nine discrete controls: surge, sway pair, diagonals, arcs.
  std::vector<Control> actions() const;
};

struct MctsRecord {
  double t = 0.0;
  int simulations = 0;
  double root_value = 0.0;       // mean return estimate at the root
  bool random_fallback = false;  // zero simulations completed before the cap
  double solve_ms = 0.0;
};

/// Receding-horizon UCT planner over the discrete action set. Rewards are
/// evaluated against a frozen belief snapshot: expected first-sweep
/// sampling gain of the DLC footprint plus a small one-shot entropy bonus
/// for newly scanned sonar area. Deterministic for a fixed seed in
/// fixed-simulation-count mode.
class MctsPlanner {
 public:
  MctsPlanner(const GridSpec& grid, const ScoutSensorSpec& fls,
              const DlcSpec& dlc, const MctsConfig& cfg);

  Control plan(const RobotState& state, const BeliefState& belief, Rng& rng,
               MctsRecord* record = nullptr);

 private:
  struct Node;
  double simulate(std::vector<Node>& tree, std::size_t node_idx, int depth,
                  Rng& rng);
  double step_reward(const RobotState& state);
  RobotState apply(const RobotState& state, const Control& u) const;

  GridSpec grid_;
  ScoutSensorSpec fls_;
  DlcSpec dlc_;
  MctsConfig cfg_;
  std::vector<Control> actions_;

  // Per-decision snapshot caches and scratch with undo logs, so rollouts
  // never touch the live belief.
  std::vector<double> prob_c_;        // sigmoid(ell_c) per fine cell
  std::vector<std::uint8_t> swept_;   // xi plus cells swept in this rollout
  std::vector<int> swept_undo_;
  std::vector<double> info_gain_;     // one-shot entropy bonus per coarse cell
  std::vector<std::uint8_t> scanned_;
  std::vector<int> scanned_undo_;
  GridSpec coarse_;
};

}  // namespace benthos
