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

#include "benthos/proxy_dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace benthos {

RobotState kinematics_step(const RobotState& x, const Control& u, double dt) {
  const double c = std::cos(x.theta);
  const double s = std::sin(x.theta);
  RobotState out;
  out.x = x.x + dt * (u.vx * c - u.vy * s);
  out.y = x.y + dt * (u.vx * s + u.vy * c);
  out.theta = wrap_angle(x.theta + dt * u.omega);
  return out;
}

void soft_clamp(double x, double lo, double hi, double tau, double& value,
                double& deriv) {
  // lo + sp(x - lo) - sp(x - hi) with sp(t) = tau * softplus(t / tau).
  auto sp = [tau](double t, double& d) {
    const double z = t / tau;
    if (z > 30.0) {
      d = 1.0;
      return t;
    }
    if (z < -30.0) {
      d = 0.0;
      return 0.0;
    }
    d = 1.0 / (1.0 + std::exp(-z));
    return tau * std::log1p(std::exp(z));
  };
  double d1, d2;
  const double a = sp(x - lo, d1);
  const double b = sp(x - hi, d2);
  value = lo + a - b;
  deriv = d1 - d2;
}

double evidence_magnitude(double d, const ScoutSensorSpec& spec,
                          const ProxySensorParams& params, double* deta) {
  const double dn_slope = 1.0 / spec.r_max;
  const double ptp_raw = 1.0 - spec.tp_slope * d * dn_slope;
  const double pfp_raw = spec.fp_slope * d * dn_slope;
  double ptp, dptp, pfp, dpfp;
  soft_clamp(ptp_raw, params.prob_clamp_lo, params.prob_clamp_hi,
             params.prob_clamp_tau, ptp, dptp);
  soft_clamp(pfp_raw, params.prob_clamp_lo, params.prob_clamp_hi,
             params.prob_clamp_tau, pfp, dpfp);
  dptp *= -spec.tp_slope * dn_slope;  // chain through the linear profile
  dpfp *= spec.fp_slope * dn_slope;

  const double f = std::log(ptp) - std::log(pfp);
  const double g = std::log(1.0 - pfp) - std::log(1.0 - ptp);
  const double df = dptp / ptp - dpfp / pfp;
  const double dg = -dpfp / (1.0 - pfp) + dptp / (1.0 - ptp);
  // |.| per the definition; sign flips only far outside the sensor range
  // where the visibility mask has already vanished.
  const double sf = f >= 0.0 ? 1.0 : -1.0;
  const double sg = g >= 0.0 ? 1.0 : -1.0;
  if (deta != nullptr) *deta = 0.5 * (sf * df + sg * dg);
  return 0.5 * (sf * f + sg * g);
}

double evidence_magnitude_exact(double d, const ScoutSensorSpec& spec) {
  const double ptp = spec.p_tp(d);
  const double pfp = spec.p_fp(d);
  const double f = std::log(ptp) - std::log(pfp);
  const double g = std::log(1.0 - pfp) - std::log(1.0 - ptp);
  return 0.5 * (std::abs(f) + std::abs(g));
}

double soft_fov_sector(const RobotState& x, const Vec2& cell,
                       const ScoutSensorSpec& spec,
                       const ProxySensorParams& params) {
  const double dx = cell.x - x.x;
  const double dy = cell.y - x.y;
  const double d = std::sqrt(dx * dx + dy * dy +
                             params.dist_soft * params.dist_soft);
  const double sr = sigmoid(params.gamma_d * (spec.r_max - d));
  const double cosphi =
      (dx * std::cos(x.theta) + dy * std::sin(x.theta)) / d;
  const double cosb = std::cos(spec.half_angle_rad());
  const double sb = sigmoid(params.gamma_a * (cosphi - cosb));
  return sr * sb;
}

double soft_fov_dlc(const RobotState& x, const Vec2& cell, double side_len,
                    const ProxySensorParams& params) {
  const double c = std::cos(x.theta);
  const double s = std::sin(x.theta);
  const double dx = cell.x - x.x;
  const double dy = cell.y - x.y;
  const double lon = c * dx + s * dy;
  const double lat = -s * dx + c * dy;
  const double half = 0.5 * side_len;
  const double eps2 = params.body_abs_soft * params.body_abs_soft;
  const double alon = std::sqrt(lon * lon + eps2);
  const double alat = std::sqrt(lat * lat + eps2);
  return sigmoid((half - alon) / params.epsilon) *
         sigmoid((half - alat) / params.epsilon);
}

double h_proxy(double lambda) {
  const double a = std::abs(lambda);
  const double t = std::exp(-a);
  return std::log1p(t) + a * t / (1.0 + t);
}

double h_proxy_deriv(double lambda) {
  const double t = std::exp(-std::abs(lambda));
  const double sp = t / ((1.0 + t) * (1.0 + t));  // sigma'(lambda)
  return -std::abs(lambda) * sp;
}

double p_samp(double lambda_down, double rate) {
  return -std::expm1(-rate * lambda_down);
}

ActiveMap build_active_map(const BeliefState& belief, int pooling) {
  if (pooling < 1) throw ValidationError("pooling must be >= 1");
  const GridSpec& fine = belief.spec;
  if (fine.rows % pooling != 0 || fine.cols % pooling != 0) {
    throw ValidationError("pooling must divide the grid dimensions");
  }
  ActiveMap m;
  m.coarse = GridSpec::make(fine.width_m, fine.height_m,
                            fine.cell_size * pooling);
  const int n = m.coarse.cell_count();
  m.centers.resize(static_cast<std::size_t>(n));
  m.lambda0_fls.assign(static_cast<std::size_t>(n), 0.0);
  m.lambda0_flc.assign(static_cast<std::size_t>(n), 0.0);
  const double inv = 1.0 / (pooling * pooling);
  for (int cr = 0; cr < m.coarse.rows; ++cr) {
    for (int cc = 0; cc < m.coarse.cols; ++cc) {
      const int ci = m.coarse.index(cr, cc);
      m.centers[static_cast<std::size_t>(ci)] = m.coarse.cell_center(ci);
      double sum_s = 0.0, sum_c = 0.0;
      for (int r = cr * pooling; r < (cr + 1) * pooling; ++r) {
        for (int c = cc * pooling; c < (cc + 1) * pooling; ++c) {
          const std::size_t fi = static_cast<std::size_t>(fine.index(r, c));
          sum_s += std::abs(belief.ell_s[fi]);
          sum_c += std::abs(belief.ell_c[fi]);
        }
      }
      m.lambda0_fls[static_cast<std::size_t>(ci)] = sum_s * inv;
      m.lambda0_flc[static_cast<std::size_t>(ci)] = sum_c * inv;
    }
  }
  return m;
}

namespace {

double alpha_scout(const RobotState& x, const Vec2& cell,
                   const ScoutSensorSpec& spec, const ProxySensorParams& p,
                   FovMode mode) {
  if (mode == FovMode::kSoft) return soft_fov_sector(x, cell, spec, p);
  return sector_contains(x, spec, cell) ? 1.0 : 0.0;
}

double alpha_dlc(const RobotState& x, const Vec2& cell, const DlcSpec& spec,
                 const ProxySensorParams& p, FovMode mode) {
  if (mode == FovMode::kSoft) return soft_fov_dlc(x, cell, spec.side_len, p);
  return footprint_contains(x, spec, cell) ? 1.0 : 0.0;
}

}  // namespace

std::vector<ProxyBeliefState> rollout_proxy(
    const RobotState& x0, std::span<const Control> controls, double dt,
    const ProxyBeliefState& proxy0, const std::vector<Vec2>& scout_cells,
    const std::vector<Vec2>& candidate_cells, const ScoutSensorSpec& fls,
    const ScoutSensorSpec& flc, const DlcSpec& dlc,
    const ProxySensorParams& params, FovMode mode) {
  if (proxy0.lambda_fls.size() != scout_cells.size() ||
      proxy0.lambda_flc.size() != scout_cells.size() ||
      proxy0.lambda_down.size() != candidate_cells.size()) {
    throw ValidationError("proxy state sizes do not match cell sets");
  }
  std::vector<ProxyBeliefState> out;
  out.reserve(controls.size() + 1);
  out.push_back(proxy0);
  RobotState x = x0;
  for (const Control& u : controls) {
    x = kinematics_step(x, u, dt);
    ProxyBeliefState next = out.back();
    for (std::size_t i = 0; i < scout_cells.size(); ++i) {
      const Vec2& q = scout_cells[i];
      const double dx = q.x - x.x;
      const double dy = q.y - x.y;
      double d;
      if (mode == FovMode::kSoft) {
        d = std::sqrt(dx * dx + dy * dy + params.dist_soft * params.dist_soft);
      } else {
        d = std::hypot(dx, dy);
      }
      {
        const double a = alpha_scout(x, q, fls, params, mode);
        if (a > 0.0) {
          const double eta = mode == FovMode::kSoft
                                 ? evidence_magnitude(d, fls, params)
                                 : evidence_magnitude_exact(d, fls);
          next.lambda_fls[i] += eta * a;
        }
      }
      {
        const double a = alpha_scout(x, q, flc, params, mode);
        if (a > 0.0) {
          const double eta = mode == FovMode::kSoft
                                 ? evidence_magnitude(d, flc, params)
                                 : evidence_magnitude_exact(d, flc);
          next.lambda_flc[i] += eta * a;
        }
      }
    }
    for (std::size_t j = 0; j < candidate_cells.size(); ++j) {
      const double a = alpha_dlc(x, candidate_cells[j], dlc, params, mode);
      next.lambda_down[j] += params.eta_down * a;
    }
    out.push_back(std::move(next));
  }
  return out;
}

}  // namespace benthos
