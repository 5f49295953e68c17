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

// Closed-loop mission orchestration: time-triggered local planning,
// event-triggered global planning, sensing, belief updates, budget
// enforcement, and logging.

#include <optional>
#include <string>
#include <vector>

#include "benthos/baselines.hpp"
#include "benthos/belief.hpp"
#include "benthos/global_planner.hpp"
#include "benthos/local_planner.hpp"
#include "benthos/world.hpp"

namespace benthos {

enum class PlannerKind { kHimos, kBoustrophedon, kMcts };

const char* to_string(PlannerKind k);
PlannerKind planner_from_string(const std::string& s);

struct MissionConfig {
  // Environment: either a map file or the generator config.
  bool map_from_file = false;
  std::string map_path;
  MapGenConfig map_gen;
  std::string difficulty;  // label carried into reports; may be empty

  // Mission clock and control cadence.
  double t_total = 2000.0;  // seconds
  double dt = 0.5;          // seconds per step
  int n_exec = 4;           // executed steps per local replan
  PlannerKind planner = PlannerKind::kHimos;
  std::uint64_t seed = 1;
  double stall_factor = 3.0;  // force a global replan past this * t_local

  // Start pose: sampled inside the map from the seed unless given.
  bool start_auto = true;
  double start_x = 0.0;
  double start_y = 0.0;
  double start_theta = 0.0;
  double start_margin = 2.0;

  ScoutSensorSpec fls = ScoutSensorSpec::fls_default();
  ScoutSensorSpec flc = ScoutSensorSpec::flc_default();
  DlcSpec dlc;

  double ell_min = -10.0;
  double ell_max = 10.0;
  double delta = 0.8;  // candidate confidence threshold

  GlobalPlannerConfig global_cfg;
  LocalPlannerConfig local_cfg;
  MctsConfig mcts;
  double boustrophedon_spacing = 1.0;

  void validate() const;
  static MissionConfig defaults();
};

struct StepRecord {
  double t = 0.0;
  double x = 0.0, y = 0.0, theta = 0.0;
  int samples = 0;       // cumulative confirmed corals
  double distance = 0.0; // cumulative path length
};

struct MissionSummary {
  double final_t = 0.0;
  int steps = 0;
  int samples = 0;
  int total_coral = 0;
  bool ratio_defined = false;
  double ratio = 0.0;  // meaningful only when ratio_defined
  double distance = 0.0;
  int global_calls = 0;
  int local_solves = 0;
  int mcts_decisions = 0;
};

struct MissionLog {
  std::string planner;
  std::uint64_t seed = 0;
  std::string difficulty;
  double t_total = 0.0;
  double dt = 0.0;
  int map_rows = 0, map_cols = 0;
  double cell_size = 0.0;
  int total_coral = 0;
  int total_substrate = 0;

  std::vector<StepRecord> steps;
  std::vector<GlobalPlanRecord> global_events;
  std::vector<LocalPlanRecord> local_events;
  std::vector<MctsRecord> mcts_events;
  MissionSummary summary;

  /// FNV-1a 64 over every simulated quantity; measured wall times are
  /// excluded (they are the only physically nondeterministic fields).
  std::uint64_t determinism_digest() const;
};

/// True iff the robot position lies inside the directive's target region
/// (half-open rectangle, matching the world module's boundary convention).
bool has_reached(const RobotState& state, const GlobalDirective& directive);

/// Runs one closed-loop mission. Deterministic given (config, seed) as
/// long as the solver wall-clock caps stay disabled (the shipped default).
MissionLog run_mission(const MissionConfig& config);

struct SweepItem {
  MissionConfig config;
  std::string label;
};

struct RunResult {
  int index = -1;
  std::string label;
  bool ok = false;
  std::string error;
  MissionLog log;
};

/// Runs every item, optionally across `jobs` worker threads. Individual
/// failures are captured per run; the sweep continues.
std::vector<RunResult> run_sweep(const std::vector<SweepItem>& items, int jobs);

}  // namespace benthos
