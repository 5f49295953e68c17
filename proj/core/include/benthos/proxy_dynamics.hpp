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

// Deterministic, differentiable surrogate of the stochastic sensing
// process: accumulated observation confidence driven by smooth
// field-of-view masks and per-distance evidence magnitudes.

#include <span>
#include <vector>

#include "benthos/belief.hpp"
#include "benthos/sensors.hpp"

namespace benthos {

/// Body-frame control: surge, sway (m/s) and yaw rate (rad/s).
struct Control {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;
};

/// Holonomic SE(2) step: body velocities rotated into the world frame,
/// heading integrated and wrapped. Differentiable in state and control.
RobotState kinematics_step(const RobotState& x, const Control& u, double dt);

struct ProxySensorParams {
  double gamma_d = 4.0;    // 1/m, range boundary steepness
  double gamma_a = 8.0;    // bearing boundary steepness
  double epsilon = 0.05;   // m, DLC footprint boundary softness
  double eta_down = 1.0;   // per-step DLC information rate
  double lambda_sat = 1.0; // sampling saturation rate
  int pooling = 4;         // active-map pooling factor

  // Numerical smoothing so every cost term stays C^1 for the gradient
  // checks: probabilities are soft-clamped before logs, distances and
  // body-frame offsets never develop |.| kinks at zero.
  double prob_clamp_lo = 0.01;
  double prob_clamp_hi = 0.99;
  double prob_clamp_tau = 0.002;
  double dist_soft = 1e-3;      // m
  double body_abs_soft = 1e-4;  // m
};

/// Smooth scalar clamp: identity well inside [lo, hi], saturating softly
/// at the bounds with transition width tau. Returns value and d/dx.
void soft_clamp(double x, double lo, double hi, double tau, double& value,
                double& deriv);

/// Average evidence magnitude per observation at distance d (nats), the
/// smooth planner form with soft-clamped probabilities. Also writes the
/// derivative wrt d when deta != nullptr.
double evidence_magnitude(double d, const ScoutSensorSpec& spec,
                          const ProxySensorParams& params,
                          double* deta = nullptr);

/// Raw form with unclamped probabilities; diverges to +inf as the false
/// positive rate hits zero (perfect sensor at d=0). This is the quantity
/// that upper-bounds a single stochastic log-odds increment.
double evidence_magnitude_exact(double d, const ScoutSensorSpec& spec);

/// Smooth sector visibility in [0,1]: product of a range sigmoid and a
/// bearing sigmoid.
double soft_fov_sector(const RobotState& x, const Vec2& cell,
                       const ScoutSensorSpec& spec,
                       const ProxySensorParams& params);

/// Smooth square-footprint mask in [0,1] for the down-looking camera.
double soft_fov_dlc(const RobotState& x, const Vec2& cell, double side_len,
                    const ProxySensorParams& params);

/// Entropy surrogate H(L) = ln(1+e^L) - L*sigma(L), evaluated without
/// cancellation; strictly decreasing and convex, H(0) = ln 2.
double h_proxy(double lambda);
/// dH/dL = -L * sigma'(L).
double h_proxy_deriv(double lambda);

/// Saturating sampling probability 1 - exp(-rate * lambda_down).
double p_samp(double lambda_down, double rate);

/// Coarsened planning grid: each coarse cell holds the mean absolute
/// log-odds of its constituent fine cells, per scouting layer.
struct ActiveMap {
  GridSpec coarse;
  std::vector<Vec2> centers;
  std::vector<double> lambda0_fls;  // pooled |ell_s|
  std::vector<double> lambda0_flc;  // pooled |ell_c|
};

/// pooling must divide both grid dimensions. pooling == 1 is the identity.
ActiveMap build_active_map(const BeliefState& belief, int pooling);

/// Confidence states along a rollout. Sizes follow the cell vectors given
/// to rollout_proxy.
struct ProxyBeliefState {
  std::vector<double> lambda_fls;
  std::vector<double> lambda_flc;
  std::vector<double> lambda_down;
};

enum class FovMode {
  kSoft,  // smooth masks + clamped evidence (the optimizer surrogate)
  kHard,  // binary masks + exact evidence (the conservative upper bound)
};

/// Rolls the confidence recursion L_{k+1} = L_k + eta(d) * alpha(x_{k+1})
/// along the controls; sensing happens after each step. Returns H+1
/// snapshots (index 0 = initial state). All lambdas are non-decreasing.
std::vector<ProxyBeliefState> rollout_proxy(
    const RobotState& x0, std::span<const Control> controls, double dt,
    const ProxyBeliefState& proxy0, const std::vector<Vec2>& scout_cells,
    const std::vector<Vec2>& candidate_cells, const ScoutSensorSpec& fls,
    const ScoutSensorSpec& flc, const DlcSpec& dlc,
    const ProxySensorParams& params, FovMode mode = FovMode::kSoft);

}  // namespace benthos
