#pragma once

// Shared builders for local-planner tests and the acceptance suite.

#include <vector>

#include "benthos/local_planner.hpp"
#include "benthos/rng.hpp"

namespace benthos::test {

struct RandomInstance {
  BeliefState belief;
  CandidateMap candidates;
  GlobalDirective directive;
  RobotState x0;
  CostContext ctx;
  std::vector<Control> controls;
};

/// Randomized pose, belief snapshot, 5-20 candidates, and a control
/// sequence strictly inside the box constraints (so finite differencing
/// never collides with the projection boundary).
inline RandomInstance make_random_instance(Rng& rng, int horizon,
                                           double map_size = 16.0) {
  RandomInstance inst;
  const GridSpec spec = GridSpec::make(map_size, map_size, 0.25);
  inst.belief = BeliefState::uniform_prior(spec);
  for (auto& e : inst.belief.ell_s) e = rng.uniform(-6.0, 6.0);
  for (auto& e : inst.belief.ell_c) e = rng.uniform(-6.0, 6.0);

  const int n_cand = 5 + static_cast<int>(rng.uniform_int(16));
  inst.candidates.flags.assign(inst.belief.ell_c.size(), 0);
  for (int i = 0; i < n_cand; ++i) {
    const int cell = static_cast<int>(rng.uniform_int(
        static_cast<std::uint64_t>(spec.cell_count())));
    if (!inst.candidates.flags[static_cast<std::size_t>(cell)]) {
      inst.candidates.flags[static_cast<std::size_t>(cell)] = 1;
      inst.candidates.cells.push_back(cell);
    }
  }

  inst.x0 = {rng.uniform(2.0, map_size - 2.0),
             rng.uniform(2.0, map_size - 2.0),
             rng.uniform(-3.141592653589793, 3.141592653589793)};
  inst.directive.target = {rng.uniform(1.0, map_size - 1.0),
                           rng.uniform(1.0, map_size - 1.0)};
  inst.directive.t_local = horizon * 0.5;

  LocalPlannerConfig cfg;
  inst.ctx = build_cost_context(inst.x0, inst.belief, inst.candidates,
                                inst.directive, ScoutSensorSpec::fls_default(),
                                ScoutSensorSpec::flc_default(), DlcSpec{}, cfg,
                                /*steps_remaining=*/1 << 20);

  inst.controls.resize(static_cast<std::size_t>(inst.ctx.horizon));
  for (auto& u : inst.controls) {
    u.vx = rng.uniform(-0.45, 0.45);
    u.vy = rng.uniform(-0.45, 0.45);
    u.omega = rng.uniform(-0.9, 0.9);
  }
  return inst;
}

struct FdCheck {
  double max_rel_err = 0.0;
  int components = 0;
};

/// Central finite differences of the cost against the analytic gradient.
inline FdCheck finite_difference_check(const CostContext& ctx,
                                       std::vector<Control> controls,
                                       double h = 1e-5) {
  const int n = static_cast<int>(controls.size());
  std::vector<Control> grad(static_cast<std::size_t>(n));
  cost_and_grad(ctx, controls, grad, nullptr);

  FdCheck out;
  out.components = 3 * n;
  auto probe = [&](double* slot, double analytic) {
    const double saved = *slot;
    *slot = saved + h;
    const double jp = cost_and_grad(ctx, controls, {}, nullptr);
    *slot = saved - h;
    const double jm = cost_and_grad(ctx, controls, {}, nullptr);
    *slot = saved;
    const double fd = (jp - jm) / (2.0 * h);
    const double denom = std::max({std::abs(fd), std::abs(analytic), 1e-6});
    out.max_rel_err = std::max(out.max_rel_err,
                               std::abs(fd - analytic) / denom);
  };
  for (int k = 0; k < n; ++k) {
    probe(&controls[static_cast<std::size_t>(k)].vx,
          grad[static_cast<std::size_t>(k)].vx);
    probe(&controls[static_cast<std::size_t>(k)].vy,
          grad[static_cast<std::size_t>(k)].vy);
    probe(&controls[static_cast<std::size_t>(k)].omega,
          grad[static_cast<std::size_t>(k)].omega);
  }
  return out;
}

}  // namespace benthos::test
