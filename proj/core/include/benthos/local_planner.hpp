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

// Time-triggered tactical planner: a finite-horizon trajectory optimizer
// over the differentiable belief dynamics, solved by projected L-BFGS with
// an analytic adjoint gradient (single shooting, so kinematic consistency
// is exact by construction).

#include <span>
#include <vector>

#include "benthos/global_planner.hpp"
#include "benthos/proxy_dynamics.hpp"

namespace benthos {

struct CostWeights {
  double w_s = 1.0;        // substrate scouting entropy
  double w_c = 10.0;       // coral scouting entropy
  double w_samp = 5.0;     // candidate sampling
  double w_energy = 0.01;  // control energy
  double w_jerk = 0.05;    // control rate
  double w_terminal = 0.5; // per m^2 toward the global waypoint
};

struct LocalPlannerConfig {
  double dt = 0.5;
  double v_max = 0.5;
  double omega_max = 1.0;
  int h_max = 40;              // horizon cap (20 s look-ahead)
  int max_iters = 25;
  int lbfgs_memory = 8;
  double grad_tol = 1e-4;      // projected-gradient convergence threshold
  double f_tol = 1e-7;         // relative cost-change convergence threshold
  double time_cap_s = 0.0;     // wall-clock cap; <= 0 disables
  double init_speed_frac = 0.8;
  double active_entropy_min = 0.004;  // prune cells both layers consider done
  CostWeights weights;
  ProxySensorParams proxy;
};

/// Evidence magnitude sampled on a uniform distance grid with exact knot
/// derivatives; evaluated by cubic Hermite interpolation, so it is C^1 and
/// its reported derivative is the exact derivative of the interpolant.
struct EvidenceTable {
  double d_max = 0.0;
  double dd = 0.0;
  std::vector<double> eta;
  std::vector<double> deta;

  static EvidenceTable build(const ScoutSensorSpec& spec,
                             const ProxySensorParams& params, double d_max,
                             int knots = 4096);
  void eval(double d, double& eta_out, double& deta_out) const;
};

/// Everything a cost evaluation needs, frozen at solve start. Freezing the
/// active cell sets keeps the cost a smooth function of the controls.
struct SensorActiveSet {
  ScoutSensorSpec spec;
  double weight = 1.0;
  std::vector<Vec2> centers;
  std::vector<double> lambda0;
  EvidenceTable table;
};

struct CostContext {
  RobotState x0;
  int horizon = 0;
  double dt = 0.5;
  Vec2 goal;
  double v_max = 0.5;
  double omega_max = 1.0;
  CostWeights weights;
  ProxySensorParams proxy;
  SensorActiveSet fls;
  SensorActiveSet flc;
  DlcSpec dlc;
  std::vector<Vec2> candidates;  // fine-grid candidate cell centers
};

struct CostBreakdown {
  double scout = 0.0;
  double samp = 0.0;
  double reg = 0.0;
  double total = 0.0;
};

/// J = J_scout + J_samp + J_reg and (optionally) its analytic gradient
/// dJ/dU via the adjoint of the rollout. Pass an empty grad span to skip
/// gradient work.
double cost_and_grad(const CostContext& ctx, std::span<const Control> controls,
                     std::span<Control> grad, CostBreakdown* breakdown = nullptr);

struct TrajectoryPlan {
  std::vector<Control> controls;
  std::vector<RobotState> states;  // horizon + 1, exact kinematic rollout
  double cost = 0.0;
  CostBreakdown breakdown;
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
  int evaluations = 0;
};

struct LocalPlanRecord {
  double t = 0.0;
  int horizon = 0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  bool diverged = false;
  double cost = 0.0;
  double j_scout = 0.0;
  double j_samp = 0.0;
  double j_reg = 0.0;
  double solve_ms = 0.0;  // wall time; excluded from the determinism digest
};

/// Builds the frozen context: horizon from the directive budget (clamped
/// to [1, h_max] and to the remaining mission steps), pooled active map
/// pruned by reachability and residual entropy, candidate cells pruned by
/// reachability.
CostContext build_cost_context(const RobotState& x0, const BeliefState& belief,
                               const CandidateMap& candidates,
                               const GlobalDirective& directive,
                               const ScoutSensorSpec& fls,
                               const ScoutSensorSpec& flc, const DlcSpec& dlc,
                               const LocalPlannerConfig& cfg,
                               int steps_remaining);

/// Projected L-BFGS on the box-constrained controls, warm-startable with a
/// previous plan (shifted by the executed steps). Deterministic given the
/// context and warm start when the time cap is disabled. On non-finite
/// cost the best previous iterate is returned with `diverged` set.
TrajectoryPlan optimize_trajectory(const CostContext& ctx,
                                   const LocalPlannerConfig& cfg,
                                   const std::vector<Control>* warm_start = nullptr,
                                   LocalPlanRecord* record = nullptr);

/// Convenience overload following the mission flow: snapshot -> context ->
/// optimize.
TrajectoryPlan optimize_trajectory(const RobotState& x0,
                                   const BeliefState& belief,
                                   const CandidateMap& candidates,
                                   const GlobalDirective& directive,
                                   const ScoutSensorSpec& fls,
                                   const ScoutSensorSpec& flc,
                                   const DlcSpec& dlc,
                                   const LocalPlannerConfig& cfg,
                                   int steps_remaining,
                                   const std::vector<Control>* warm_start = nullptr,
                                   LocalPlanRecord* record = nullptr);

}  // namespace benthos
