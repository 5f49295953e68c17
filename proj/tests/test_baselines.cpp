#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "benthos/baselines.hpp"
#include "benthos/sensors.hpp"

using namespace benthos;

namespace {

constexpr double kPi = 3.14159265358979323846;

BeliefState converged_belief(const GridSpec& spec) {
  BeliefState b = BeliefState::uniform_prior(spec);
  for (auto& e : b.ell_s) e = 10.0;
  for (auto& e : b.ell_c) e = -10.0;
  return b;
}

}  // namespace

TEST_CASE("controller surges at a waypoint dead ahead, saturates turns") {
  LawnmowerPlan plan;
  plan.waypoints = {{10.0, 0.0}};
  BoustrophedonController ctrl(plan, 0.5, 1.0);
  Control u = ctrl.next_control({0, 0, 0});
  CHECK(u.vx == doctest::Approx(0.5));
  CHECK(u.omega == doctest::Approx(0.0));

  LawnmowerPlan behind;
  behind.waypoints = {{-10.0, 0.0}};
  BoustrophedonController back(behind, 0.5, 1.0);
  u = back.next_control({0, 0, 0});
  CHECK(std::abs(u.omega) == doctest::Approx(1.0));
  CHECK(u.vx == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("exhausted plans produce zero control and a completion flag") {
  LawnmowerPlan plan;
  plan.waypoints = {{0.05, 0.0}};
  BoustrophedonController ctrl(plan, 0.5, 1.0);
  const Control u = ctrl.next_control({0, 0, 0});
  CHECK(ctrl.finished());
  CHECK(u.vx == 0.0);
  CHECK(u.omega == 0.0);
}

TEST_CASE("full lawnmower execution covers nearly every cell") {
  const GridSpec spec = GridSpec::make(10.0, 10.0, 0.25);
  const DlcSpec dlc;
  BoustrophedonController ctrl(make_lawnmower_plan(spec, dlc.side_len), 0.5,
                               1.0);
  RobotState x{0.5, 0.5, kPi / 2};
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(spec.cell_count()),
                                    0);
  std::size_t prev_wp = 0;
  for (int step = 0; step < 4000 && !ctrl.finished(); ++step) {
    const Control u = ctrl.next_control(x);
    CHECK(ctrl.waypoint_index() >= prev_wp);  // waypoint index is monotone
    prev_wp = ctrl.waypoint_index();
    CHECK(std::abs(u.vx) <= 0.5 + 1e-12);
    CHECK(std::abs(u.omega) <= 1.0 + 1e-12);
    x = kinematics_step(x, u, 0.5);
    x.x = std::clamp(x.x, 0.0, spec.width_m - 1e-9);
    x.y = std::clamp(x.y, 0.0, spec.height_m - 1e-9);
    for (int c : footprint_cells(x, dlc, spec)) {
      covered[static_cast<std::size_t>(c)] = 1;
    }
  }
  CHECK(ctrl.finished());
  const double frac =
      static_cast<double>(std::count(covered.begin(), covered.end(), 1)) /
      spec.cell_count();
  CHECK(frac >= 0.99);
}

TEST_CASE("the MCTS action set matches the nine-control catalogue") {
  const MctsConfig cfg;
  const auto actions = cfg.actions();
  REQUIRE(actions.size() == 9);
  const double vd = 0.5 / std::sqrt(2.0);
  CHECK(actions[0].vx == doctest::Approx(0.5));
  CHECK(actions[1].vy == doctest::Approx(0.5));
  CHECK(actions[2].vy == doctest::Approx(-0.5));
  CHECK(actions[3].vx == doctest::Approx(vd));
  CHECK(actions[3].vy == doctest::Approx(vd));
  CHECK(actions[5].omega == doctest::Approx(0.5));
  CHECK(actions[7].omega == doctest::Approx(1.0));
  CHECK(actions[8].omega == doctest::Approx(-1.0));
}

TEST_CASE("MCTS drives the footprint onto the lone candidate") {
  const GridSpec spec = GridSpec::make(10.0, 10.0, 0.25);
  BeliefState b = converged_belief(spec);
  // One confident unverified candidate just beyond the current footprint.
  const auto target = cells_in_region(spec, {5.55, 5.05, 5.7, 5.2});
  REQUIRE(target.size() == 1);
  b.ell_c[static_cast<std::size_t>(target[0])] = 10.0;
  const Vec2 cand = spec.cell_center(target[0]);

  MctsConfig cfg;
  cfg.n_sims = 300;
  MctsPlanner planner(spec, ScoutSensorSpec::fls_default(), DlcSpec{}, cfg);
  Rng rng(17);
  const RobotState x{5.0, 5.0, 0.0};
  const Control u = planner.plan(x, b, rng);
  const RobotState nx = kinematics_step(x, u, cfg.dt);
  CHECK(footprint_contains(nx, DlcSpec{}, cand));
}

TEST_CASE("MCTS stays within the action set when nothing is rewarding") {
  const GridSpec spec = GridSpec::make(8.0, 8.0, 0.25);
  const BeliefState b = converged_belief(spec);
  MctsConfig cfg;
  cfg.n_sims = 60;
  MctsPlanner planner(spec, ScoutSensorSpec::fls_default(), DlcSpec{}, cfg);
  Rng rng(3);
  MctsRecord rec;
  const Control u = planner.plan({4, 4, 0.2}, b, rng, &rec);
  CHECK(rec.simulations == 60);
  CHECK_FALSE(rec.random_fallback);
  bool in_set = false;
  for (const auto& a : cfg.actions()) {
    if (a.vx == u.vx && a.vy == u.vy && a.omega == u.omega) in_set = true;
  }
  CHECK(in_set);
}

TEST_CASE("a vanishing wall-clock budget falls back to a random action") {
  const GridSpec spec = GridSpec::make(8.0, 8.0, 0.25);
  const BeliefState b = converged_belief(spec);
  MctsConfig cfg;
  cfg.time_cap_s = 1e-12;
  MctsPlanner planner(spec, ScoutSensorSpec::fls_default(), DlcSpec{}, cfg);
  Rng rng(5);
  MctsRecord rec;
  planner.plan({4, 4, 0.0}, b, rng, &rec);
  CHECK(rec.simulations == 0);
  CHECK(rec.random_fallback);
}

TEST_CASE("fixed-simulation-count mode is deterministic per seed") {
  const GridSpec spec = GridSpec::make(10.0, 10.0, 0.25);
  BeliefState b = BeliefState::uniform_prior(spec);
  b.ell_c[200] = 5.0;
  b.ell_c[800] = 4.0;
  MctsConfig cfg;
  cfg.n_sims = 120;
  auto run = [&](std::uint64_t seed) {
    MctsPlanner planner(spec, ScoutSensorSpec::fls_default(), DlcSpec{}, cfg);
    Rng rng(seed);
    std::vector<Control> seq;
    RobotState x{5, 5, 0};
    for (int i = 0; i < 5; ++i) {
      const Control u = planner.plan(x, b, rng);
      seq.push_back(u);
      x = kinematics_step(x, u, cfg.dt);
    }
    return seq;
  };
  const auto a = run(9);
  const auto bseq = run(9);
  REQUIRE(a.size() == bseq.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].vx == bseq[i].vx);
    CHECK(a[i].vy == bseq[i].vy);
    CHECK(a[i].omega == bseq[i].omega);
  }
}

TEST_CASE("doubling the simulation budget does not destabilize root values") {
  const GridSpec spec = GridSpec::make(10.0, 10.0, 0.25);
  BeliefState b = BeliefState::uniform_prior(spec);
  for (std::size_t i = 0; i < b.ell_c.size(); i += 37) b.ell_c[i] = 3.0;

  auto variance_at = [&](int sims) {
    MctsConfig cfg;
    cfg.n_sims = sims;
    MctsPlanner planner(spec, ScoutSensorSpec::fls_default(), DlcSpec{}, cfg);
    std::vector<double> values;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      Rng rng(seed);
      MctsRecord rec;
      planner.plan({5, 5, 0}, b, rng, &rec);
      values.push_back(rec.root_value);
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= values.size();
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return var / values.size();
  };
  const double var_small = variance_at(40);
  const double var_large = variance_at(80);
  CHECK(var_large <= var_small * 1.25 + 1e-12);
}
