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

#include "benthos/local_planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>

namespace benthos {

EvidenceTable EvidenceTable::build(const ScoutSensorSpec& spec,
                                   const ProxySensorParams& params,
                                   double d_max, int knots) {
  if (knots < 2 || !(d_max > 0.0)) {
    throw ValidationError("bad evidence table parameters");
  }
  EvidenceTable t;
  t.d_max = d_max;
  t.dd = d_max / static_cast<double>(knots - 1);
  t.eta.resize(static_cast<std::size_t>(knots));
  t.deta.resize(static_cast<std::size_t>(knots));
  for (int i = 0; i < knots; ++i) {
    double de;
    t.eta[static_cast<std::size_t>(i)] =
        evidence_magnitude(i * t.dd, spec, params, &de);
    t.deta[static_cast<std::size_t>(i)] = de;
  }
  return t;
}

void EvidenceTable::eval(double d, double& eta_out, double& deta_out) const {
  if (d <= 0.0) {
    eta_out = eta.front();
    deta_out = deta.front();
    return;
  }
  if (d >= d_max) {  // beyond any mask support; value irrelevant there
    eta_out = eta.back();
    deta_out = 0.0;
    return;
  }
  const double u = d / dd;
  std::size_t i = static_cast<std::size_t>(u);
  if (i + 1 >= eta.size()) i = eta.size() - 2;
  const double s = u - static_cast<double>(i);
  const double y0 = eta[i], y1 = eta[i + 1];
  const double m0 = deta[i] * dd, m1 = deta[i + 1] * dd;
  const double s2 = s * s, s3 = s2 * s;
  eta_out = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 +
            (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * m1;
  deta_out = ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * m0 +
              (-6 * s2 + 6 * s) * y1 + (3 * s2 - 2 * s) * m1) /
             dd;
}

namespace {

// exp via 2^k * P(r) range reduction. The degree-9 polynomial keeps the
// relative error near 7e-12: small enough that central finite differences
// (which amplify cost noise by 1/(2h) = 5e4) still see a smooth function.
inline double fast_exp(double x) {
  if (x < -700.0) return 0.0;
  if (x > 700.0) return std::numeric_limits<double>::infinity();
  constexpr double kInvLn2 = 1.4426950408889634074;
  constexpr double kLn2Hi = 6.93147180369123816490e-1;
  constexpr double kLn2Lo = 1.90821492927058770002e-10;
  const double kd = std::nearbyint(x * kInvLn2);
  const long long k = static_cast<long long>(kd);
  const double r = (x - kd * kLn2Hi) - kd * kLn2Lo;
  double p = 1.0 / 362880.0;
  p = p * r + 1.0 / 40320.0;
  p = p * r + 1.0 / 5040.0;
  p = p * r + 1.0 / 720.0;
  p = p * r + 1.0 / 120.0;
  p = p * r + 1.0 / 24.0;
  p = p * r + 1.0 / 6.0;
  p = p * r + 0.5;
  p = p * r + 1.0;
  p = p * r + 1.0;
  std::uint64_t bits = static_cast<std::uint64_t>(1023 + k) << 52;
  double scale;
  std::memcpy(&scale, &bits, sizeof(scale));
  return p * scale;
}

inline double fast_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + fast_exp(-x));
  const double e = fast_exp(x);
  return e / (1.0 + e);
}

struct StateTrace {
  std::vector<double> px, py, th, ch, sh;

  void roll(const RobotState& x0, std::span<const Control> controls,
            double dt) {
    const std::size_t n = controls.size() + 1;
    px.resize(n);
    py.resize(n);
    th.resize(n);
    ch.resize(n);
    sh.resize(n);
    RobotState x = x0;
    px[0] = x.x;
    py[0] = x.y;
    th[0] = x.theta;
    ch[0] = std::cos(x.theta);
    sh[0] = std::sin(x.theta);
    for (std::size_t k = 0; k < controls.size(); ++k) {
      x = kinematics_step(x, controls[k], dt);
      px[k + 1] = x.x;
      py[k + 1] = x.y;
      th[k + 1] = x.theta;
      ch[k + 1] = std::cos(x.theta);
      sh[k + 1] = std::sin(x.theta);
    }
  }
};

}  // namespace

double cost_and_grad(const CostContext& ctx, std::span<const Control> controls,
                     std::span<Control> grad, CostBreakdown* breakdown) {
  const int h = ctx.horizon;
  if (static_cast<int>(controls.size()) != h) {
    throw ValidationError("control count does not match horizon");
  }
  const bool want_grad = !grad.empty();
  if (want_grad && static_cast<int>(grad.size()) != h) {
    throw ValidationError("gradient span size does not match horizon");
  }

  StateTrace tr;
  tr.roll(ctx.x0, controls, ctx.dt);

  std::vector<double> ax, ay, ath;
  if (want_grad) {
    ax.assign(static_cast<std::size_t>(h) + 1, 0.0);
    ay.assign(static_cast<std::size_t>(h) + 1, 0.0);
    ath.assign(static_cast<std::size_t>(h) + 1, 0.0);
    for (auto& g : grad) g = Control{};
  }

  const double soft2 = ctx.proxy.dist_soft * ctx.proxy.dist_soft;
  double j_scout = 0.0;
  std::vector<double> piece(want_grad ? static_cast<std::size_t>(3 * h) : 0);

  // Per cell: accumulate the evidence sum S over the horizon, then push the
  // single adjoint w * H'(lambda0 + S) back through the stored per-step
  // partials. Processing one cell at a time keeps the working set tiny.
  auto scout_sensor = [&](const SensorActiveSet& sset) {
    const double gamma_d = ctx.proxy.gamma_d;
    const double gamma_a = ctx.proxy.gamma_a;
    const double cosb = std::cos(sset.spec.half_angle_rad());
    const double r_max = sset.spec.r_max;
    // Beyond this radius the range sigmoid is < 7e-13; dropping such terms
    // perturbs the cost far below what the finite-difference probes see.
    const double cut = r_max + 28.0 / gamma_d;
    const double cut2 = cut * cut;
    for (std::size_t ci = 0; ci < sset.centers.size(); ++ci) {
      const double qx = sset.centers[ci].x;
      const double qy = sset.centers[ci].y;
      double S = 0.0;
      for (int k = 1; k <= h; ++k) {
        const std::size_t b = static_cast<std::size_t>(3 * (k - 1));
        const double dx = qx - tr.px[static_cast<std::size_t>(k)];
        const double dy = qy - tr.py[static_cast<std::size_t>(k)];
        const double d2 = dx * dx + dy * dy;
        if (d2 > cut2) {
          if (want_grad) piece[b + 0] = piece[b + 1] = piece[b + 2] = 0.0;
          continue;
        }
        const double d = std::sqrt(d2 + soft2);
        const double inv_d = 1.0 / d;
        const double sr = fast_sigmoid(gamma_d * (r_max - d));
        const double chk = tr.ch[static_cast<std::size_t>(k)];
        const double shk = tr.sh[static_cast<std::size_t>(k)];
        const double cosphi = (dx * chk + dy * shk) * inv_d;
        const double sb = fast_sigmoid(gamma_a * (cosphi - cosb));
        const double alpha = sr * sb;
        double eta, deta;
        sset.table.eval(d, eta, deta);
        S += eta * alpha;
        if (want_grad) {
          const double dd_dpx = -dx * inv_d;
          const double dd_dpy = -dy * inv_d;
          const double dsr = sr * (1.0 - sr) * gamma_d;  // times -dd_d.
          const double dsb = sb * (1.0 - sb) * gamma_a;
          const double dcos_dpx = (-chk - cosphi * dd_dpx) * inv_d;
          const double dcos_dpy = (-shk - cosphi * dd_dpy) * inv_d;
          const double dcos_dth = (-dx * shk + dy * chk) * inv_d;
          const double dalpha_dpx = -dsr * dd_dpx * sb + sr * dsb * dcos_dpx;
          const double dalpha_dpy = -dsr * dd_dpy * sb + sr * dsb * dcos_dpy;
          const double dalpha_dth = sr * dsb * dcos_dth;
          piece[b + 0] = deta * dd_dpx * alpha + eta * dalpha_dpx;
          piece[b + 1] = deta * dd_dpy * alpha + eta * dalpha_dpy;
          piece[b + 2] = eta * dalpha_dth;
        }
      }
      const double lam0 = sset.lambda0[ci];
      j_scout += sset.weight * (h_proxy(lam0 + S) - h_proxy(lam0));
      if (want_grad) {
        const double aS = sset.weight * h_proxy_deriv(lam0 + S);
        for (int k = 1; k <= h; ++k) {
          const std::size_t b = static_cast<std::size_t>(3 * (k - 1));
          ax[static_cast<std::size_t>(k)] += aS * piece[b + 0];
          ay[static_cast<std::size_t>(k)] += aS * piece[b + 1];
          ath[static_cast<std::size_t>(k)] += aS * piece[b + 2];
        }
      }
    }
  };
  scout_sensor(ctx.fls);
  scout_sensor(ctx.flc);

  double j_samp = 0.0;
  {
    const double half = 0.5 * ctx.dlc.side_len;
    const double inv_eps = 1.0 / ctx.proxy.epsilon;
    const double ba2 = ctx.proxy.body_abs_soft * ctx.proxy.body_abs_soft;
    const double rate = ctx.proxy.lambda_sat;
    const double eta_down = ctx.proxy.eta_down;
    // Same far-field cut as the scout loop: sigma(-30) mask values are
    // billionths of the finite-difference resolution.
    const double cut = half * 1.4142135623730951 + 30.0 * ctx.proxy.epsilon;
    const double cut2 = cut * cut;
    for (const Vec2& q : ctx.candidates) {
      double S = 0.0;
      for (int k = 1; k <= h; ++k) {
        const std::size_t b = static_cast<std::size_t>(3 * (k - 1));
        const double dx = q.x - tr.px[static_cast<std::size_t>(k)];
        const double dy = q.y - tr.py[static_cast<std::size_t>(k)];
        if (dx * dx + dy * dy > cut2) {
          if (want_grad) piece[b + 0] = piece[b + 1] = piece[b + 2] = 0.0;
          continue;
        }
        const double chk = tr.ch[static_cast<std::size_t>(k)];
        const double shk = tr.sh[static_cast<std::size_t>(k)];
        const double lon = chk * dx + shk * dy;
        const double lat = -shk * dx + chk * dy;
        const double alon = std::sqrt(lon * lon + ba2);
        const double alat = std::sqrt(lat * lat + ba2);
        const double sl = fast_sigmoid((half - alon) * inv_eps);
        const double st = fast_sigmoid((half - alat) * inv_eps);
        S += eta_down * sl * st;
        if (want_grad) {
          const double dsl = -sl * (1.0 - sl) * inv_eps * (lon / alon);
          const double dst = -st * (1.0 - st) * inv_eps * (lat / alat);
          piece[b + 0] = eta_down * (dsl * (-chk) * st + sl * dst * shk);
          piece[b + 1] = eta_down * (dsl * (-shk) * st + sl * dst * (-chk));
          piece[b + 2] = eta_down * (dsl * lat * st + sl * dst * (-lon));
        }
      }
      j_samp += -ctx.weights.w_samp * p_samp(S, rate);
      if (want_grad) {
        const double aS = -ctx.weights.w_samp * rate * fast_exp(-rate * S);
        for (int k = 1; k <= h; ++k) {
          const std::size_t b = static_cast<std::size_t>(3 * (k - 1));
          ax[static_cast<std::size_t>(k)] += aS * piece[b + 0];
          ay[static_cast<std::size_t>(k)] += aS * piece[b + 1];
          ath[static_cast<std::size_t>(k)] += aS * piece[b + 2];
        }
      }
    }
  }

  double j_reg = 0.0;
  {
    for (int k = 0; k < h; ++k) {
      const Control& u = controls[static_cast<std::size_t>(k)];
      j_reg += ctx.weights.w_energy *
               (u.vx * u.vx + u.vy * u.vy + u.omega * u.omega);
      if (want_grad) {
        grad[static_cast<std::size_t>(k)].vx += 2.0 * ctx.weights.w_energy * u.vx;
        grad[static_cast<std::size_t>(k)].vy += 2.0 * ctx.weights.w_energy * u.vy;
        grad[static_cast<std::size_t>(k)].omega +=
            2.0 * ctx.weights.w_energy * u.omega;
      }
    }
    for (int k = 1; k < h; ++k) {
      const Control& a = controls[static_cast<std::size_t>(k - 1)];
      const Control& b = controls[static_cast<std::size_t>(k)];
      const double dvx = b.vx - a.vx;
      const double dvy = b.vy - a.vy;
      const double dom = b.omega - a.omega;
      j_reg += ctx.weights.w_jerk * (dvx * dvx + dvy * dvy + dom * dom);
      if (want_grad) {
        const double s = 2.0 * ctx.weights.w_jerk;
        grad[static_cast<std::size_t>(k)].vx += s * dvx;
        grad[static_cast<std::size_t>(k)].vy += s * dvy;
        grad[static_cast<std::size_t>(k)].omega += s * dom;
        grad[static_cast<std::size_t>(k - 1)].vx -= s * dvx;
        grad[static_cast<std::size_t>(k - 1)].vy -= s * dvy;
        grad[static_cast<std::size_t>(k - 1)].omega -= s * dom;
      }
    }
    const double ex = tr.px[static_cast<std::size_t>(h)] - ctx.goal.x;
    const double ey = tr.py[static_cast<std::size_t>(h)] - ctx.goal.y;
    j_reg += ctx.weights.w_terminal * (ex * ex + ey * ey);
    if (want_grad) {
      ax[static_cast<std::size_t>(h)] += 2.0 * ctx.weights.w_terminal * ex;
      ay[static_cast<std::size_t>(h)] += 2.0 * ctx.weights.w_terminal * ey;
    }
  }

  if (want_grad) {
    // Adjoint sweep through the kinematics.
    for (int k = h; k >= 1; --k) {
      const Control& u = controls[static_cast<std::size_t>(k - 1)];
      const double c = tr.ch[static_cast<std::size_t>(k - 1)];
      const double s = tr.sh[static_cast<std::size_t>(k - 1)];
      const double axk = ax[static_cast<std::size_t>(k)];
      const double ayk = ay[static_cast<std::size_t>(k)];
      Control& g = grad[static_cast<std::size_t>(k - 1)];
      g.vx += ctx.dt * (axk * c + ayk * s);
      g.vy += ctx.dt * (-axk * s + ayk * c);
      g.omega += ctx.dt * ath[static_cast<std::size_t>(k)];
      ax[static_cast<std::size_t>(k - 1)] += axk;
      ay[static_cast<std::size_t>(k - 1)] += ayk;
      ath[static_cast<std::size_t>(k - 1)] +=
          ath[static_cast<std::size_t>(k)] +
          axk * ctx.dt * (-u.vx * s - u.vy * c) +
          ayk * ctx.dt * (u.vx * c - u.vy * s);
    }
  }

  const double total = j_scout + j_samp + j_reg;
  if (breakdown != nullptr) {
    breakdown->scout = j_scout;
    breakdown->samp = j_samp;
    breakdown->reg = j_reg;
    breakdown->total = total;
  }
  return total;
}

namespace {

void project(std::vector<Control>& u, double v_max, double omega_max) {
  for (auto& c : u) {
    c.vx = std::clamp(c.vx, -v_max, v_max);
    c.vy = std::clamp(c.vy, -v_max, v_max);
    c.omega = std::clamp(c.omega, -omega_max, omega_max);
  }
}

double dot(const std::vector<Control>& a, const std::vector<Control>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i].vx * b[i].vx + a[i].vy * b[i].vy + a[i].omega * b[i].omega;
  }
  return s;
}

std::vector<Control> axpy(const std::vector<Control>& x, double a,
                          const std::vector<Control>& y) {
  std::vector<Control> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    r[i] = {x[i].vx + a * y[i].vx, x[i].vy + a * y[i].vy,
            x[i].omega + a * y[i].omega};
  }
  return r;
}

std::vector<Control> sub(const std::vector<Control>& a,
                         const std::vector<Control>& b) {
  std::vector<Control> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    r[i] = {a[i].vx - b[i].vx, a[i].vy - b[i].vy, a[i].omega - b[i].omega};
  }
  return r;
}

double inf_norm(const std::vector<Control>& a) {
  double m = 0.0;
  for (const auto& c : a) {
    m = std::max({m, std::abs(c.vx), std::abs(c.vy), std::abs(c.omega)});
  }
  return m;
}

bool all_finite(const std::vector<Control>& a) {
  for (const auto& c : a) {
    if (!std::isfinite(c.vx) || !std::isfinite(c.vy) ||
        !std::isfinite(c.omega)) {
      return false;
    }
  }
  return true;
}

std::vector<Control> straight_line_seed(const CostContext& ctx,
                                        double speed_frac) {
  std::vector<Control> u(static_cast<std::size_t>(ctx.horizon));
  const Vec2 delta = ctx.goal - Vec2{ctx.x0.x, ctx.x0.y};
  const double n = delta.norm();
  if (n < 1e-12) return u;
  const double c = std::cos(ctx.x0.theta);
  const double s = std::sin(ctx.x0.theta);
  // World direction rotated into the body frame at the initial heading.
  const double ux = (c * delta.x + s * delta.y) / n;
  const double uy = (-s * delta.x + c * delta.y) / n;
  const double speed = speed_frac * ctx.v_max;
  for (auto& ck : u) ck = {speed * ux, speed * uy, 0.0};
  project(u, ctx.v_max, ctx.omega_max);
  return u;
}

}  // namespace

TrajectoryPlan optimize_trajectory(const CostContext& ctx,
                                   const LocalPlannerConfig& cfg,
                                   const std::vector<Control>* warm_start,
                                   LocalPlanRecord* record) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const std::size_t h = static_cast<std::size_t>(ctx.horizon);

  std::vector<Control> u = straight_line_seed(ctx, cfg.init_speed_frac);
  if (warm_start != nullptr && !warm_start->empty()) {
    for (std::size_t k = 0; k < h && k < warm_start->size(); ++k) {
      u[k] = (*warm_start)[k];
    }
    project(u, ctx.v_max, ctx.omega_max);
  }

  std::vector<Control> g(h);
  CostBreakdown bd;
  double j = cost_and_grad(ctx, u, g, &bd);
  int evals = 1;

  TrajectoryPlan best;
  best.controls = u;
  best.cost = j;
  best.breakdown = bd;

  auto finish = [&](bool converged, bool diverged, int iters) {
    // Rebuild the exact state rollout at the best controls.
    best.states.clear();
    best.states.reserve(h + 1);
    RobotState x = ctx.x0;
    best.states.push_back(x);
    for (const auto& uk : best.controls) {
      x = kinematics_step(x, uk, ctx.dt);
      best.states.push_back(x);
    }
    best.converged = converged;
    best.diverged = diverged;
    best.iterations = iters;
    best.evaluations = evals;
    if (record != nullptr) {
      record->horizon = ctx.horizon;
      record->iterations = iters;
      record->evaluations = evals;
      record->converged = converged;
      record->diverged = diverged;
      record->cost = best.cost;
      record->j_scout = best.breakdown.scout;
      record->j_samp = best.breakdown.samp;
      record->j_reg = best.breakdown.reg;
      record->solve_ms =
          std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
    return best;
  };

  if (!std::isfinite(j)) return finish(false, true, 0);

  // L-BFGS memory.
  std::vector<std::vector<Control>> mem_s, mem_y;
  std::vector<double> mem_rho;

  auto two_loop = [&](const std::vector<Control>& grad_in) {
    std::vector<Control> q = grad_in;
    const int m = static_cast<int>(mem_s.size());
    std::vector<double> alpha(static_cast<std::size_t>(m));
    for (int i = m - 1; i >= 0; --i) {
      alpha[static_cast<std::size_t>(i)] =
          mem_rho[static_cast<std::size_t>(i)] *
          dot(mem_s[static_cast<std::size_t>(i)], q);
      q = axpy(q, -alpha[static_cast<std::size_t>(i)],
               mem_y[static_cast<std::size_t>(i)]);
    }
    if (m > 0) {
      const auto& sl = mem_s[static_cast<std::size_t>(m - 1)];
      const auto& yl = mem_y[static_cast<std::size_t>(m - 1)];
      const double gamma = dot(sl, yl) / std::max(dot(yl, yl), 1e-300);
      for (auto& c : q) {
        c.vx *= gamma;
        c.vy *= gamma;
        c.omega *= gamma;
      }
    }
    for (int i = 0; i < m; ++i) {
      const double beta = mem_rho[static_cast<std::size_t>(i)] *
                          dot(mem_y[static_cast<std::size_t>(i)], q);
      q = axpy(q, alpha[static_cast<std::size_t>(i)] - beta,
               mem_s[static_cast<std::size_t>(i)]);
    }
    for (auto& c : q) {
      c.vx = -c.vx;
      c.vy = -c.vy;
      c.omega = -c.omega;
    }
    return q;
  };

  bool converged = false;
  int iter = 0;
  int flat_count = 0;
  for (; iter < cfg.max_iters; ++iter) {
    if (cfg.time_cap_s > 0.0) {
      const double el = std::chrono::duration<double>(Clock::now() - t0).count();
      if (el >= cfg.time_cap_s) break;
    }
    // Projected-gradient stationarity check.
    {
      std::vector<Control> pg = axpy(u, -1.0, g);
      project(pg, ctx.v_max, ctx.omega_max);
      if (inf_norm(sub(pg, u)) < cfg.grad_tol) {
        converged = true;
        break;
      }
    }

    bool accepted = false;
    std::vector<Control> u_new;
    std::vector<Control> g_new(h);
    double j_new = 0.0;
    CostBreakdown bd_new;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      std::vector<Control> dir =
          attempt == 0 && !mem_s.empty() ? two_loop(g) : g;
      if (attempt != 0 || mem_s.empty()) {
        for (auto& c : dir) {
          c.vx = -c.vx;
          c.vy = -c.vy;
          c.omega = -c.omega;
        }
      }
      double alpha = 1.0;
      if (mem_s.empty()) alpha = 1.0 / std::max(1.0, inf_norm(g));
      for (int ls = 0; ls < 30; ++ls) {
        u_new = axpy(u, alpha, dir);
        project(u_new, ctx.v_max, ctx.omega_max);
        const std::vector<Control> step = sub(u_new, u);
        const double gs = dot(g, step);
        if (inf_norm(step) < 1e-14) break;
        // Gradient evaluated alongside the trial cost: the full step is
        // usually accepted, so the gradient is rarely wasted.
        j_new = cost_and_grad(ctx, u_new, g_new, &bd_new);
        ++evals;
        if (std::isfinite(j_new) && j_new <= j + 1e-4 * gs) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
    }
    if (!accepted) break;  // no further progress along any direction

    if (!all_finite(g_new) || !std::isfinite(j_new)) {
      return finish(false, true, iter + 1);
    }

    const std::vector<Control> s_vec = sub(u_new, u);
    const std::vector<Control> y_vec = sub(g_new, g);
    const double sy = dot(s_vec, y_vec);
    if (sy > 1e-12) {
      mem_s.push_back(s_vec);
      mem_y.push_back(y_vec);
      mem_rho.push_back(1.0 / sy);
      if (static_cast<int>(mem_s.size()) > cfg.lbfgs_memory) {
        mem_s.erase(mem_s.begin());
        mem_y.erase(mem_y.begin());
        mem_rho.erase(mem_rho.begin());
      }
    }

    const double dj = j - j_new;
    u = u_new;
    g = g_new;
    j = j_new;
    bd = bd_new;
    if (j < best.cost) {
      best.controls = u;
      best.cost = j;
      best.breakdown = bd;
    }
    if (dj < cfg.f_tol * (1.0 + std::abs(j))) {
      if (++flat_count >= 2) {
        converged = true;
        ++iter;
        break;
      }
    } else {
      flat_count = 0;
    }
  }
  return finish(converged, false, iter);
}

CostContext build_cost_context(const RobotState& x0, const BeliefState& belief,
                               const CandidateMap& candidates,
                               const GlobalDirective& directive,
                               const ScoutSensorSpec& fls,
                               const ScoutSensorSpec& flc, const DlcSpec& dlc,
                               const LocalPlannerConfig& cfg,
                               int steps_remaining) {
  CostContext ctx;
  ctx.x0 = x0;
  ctx.dt = cfg.dt;
  ctx.goal = directive.target;
  ctx.v_max = cfg.v_max;
  ctx.omega_max = cfg.omega_max;
  ctx.weights = cfg.weights;
  ctx.proxy = cfg.proxy;
  ctx.dlc = dlc;

  int h = static_cast<int>(std::floor(directive.t_local / cfg.dt));
  h = std::min(h, cfg.h_max);
  if (steps_remaining > 0) h = std::min(h, steps_remaining);
  ctx.horizon = std::max(1, h);

  const ActiveMap act = build_active_map(belief, cfg.proxy.pooling);
  const double travel =
      ctx.horizon * cfg.dt * cfg.v_max * 1.4142135623730951;
  const double coarse_diag = act.coarse.cell_size * 0.7071067811865476;
  const Vec2 p0{x0.x, x0.y};

  auto fill = [&](SensorActiveSet& sset, const ScoutSensorSpec& spec,
                  double weight, const std::vector<double>& lambda0) {
    sset.spec = spec;
    sset.weight = weight;
    const double reach =
        travel + spec.r_max + 8.0 / cfg.proxy.gamma_d + coarse_diag + 0.1;
    const double reach2 = reach * reach;
    for (std::size_t i = 0; i < act.centers.size(); ++i) {
      if ((act.centers[i] - p0).squared_norm() > reach2) continue;
      if (h_proxy(lambda0[i]) < cfg.active_entropy_min) continue;
      sset.centers.push_back(act.centers[i]);
      sset.lambda0.push_back(lambda0[i]);
    }
    const double d_max =
        std::hypot(belief.spec.width_m, belief.spec.height_m) + travel + 1.0;
    sset.table = EvidenceTable::build(spec, cfg.proxy, d_max);
  };
  fill(ctx.fls, fls, cfg.weights.w_s, act.lambda0_fls);
  fill(ctx.flc, flc, cfg.weights.w_c, act.lambda0_flc);

  const double cand_reach = travel + 0.75 * dlc.side_len +
                            8.0 * cfg.proxy.epsilon + 0.25;
  const double cand_reach2 = cand_reach * cand_reach;
  for (int cell : candidates.cells) {
    const Vec2 q = belief.spec.cell_center(cell);
    if ((q - p0).squared_norm() <= cand_reach2) ctx.candidates.push_back(q);
  }
  return ctx;
}

TrajectoryPlan optimize_trajectory(const RobotState& x0,
                                   const BeliefState& belief,
                                   const CandidateMap& candidates,
                                   const GlobalDirective& directive,
                                   const ScoutSensorSpec& fls,
                                   const ScoutSensorSpec& flc,
                                   const DlcSpec& dlc,
                                   const LocalPlannerConfig& cfg,
                                   int steps_remaining,
                                   const std::vector<Control>* warm_start,
                                   LocalPlanRecord* record) {
  const CostContext ctx = build_cost_context(
      x0, belief, candidates, directive, fls, flc, dlc, cfg, steps_remaining);
  return optimize_trajectory(ctx, cfg, warm_start, record);
}

}  // namespace benthos
