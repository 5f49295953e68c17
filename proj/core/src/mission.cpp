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

#include "benthos/mission.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace benthos {

const char* to_string(PlannerKind k) {
  switch (k) {
    case PlannerKind::kHimos: return "himos";
    case PlannerKind::kBoustrophedon: return "boustrophedon";
    case PlannerKind::kMcts: return "mcts";
  }
  return "?";
}

PlannerKind planner_from_string(const std::string& s) {
  if (s == "himos") return PlannerKind::kHimos;
  if (s == "boustrophedon") return PlannerKind::kBoustrophedon;
  if (s == "mcts") return PlannerKind::kMcts;
  throw ValidationError("unknown planner: " + s);
}

void MissionConfig::validate() const {
  if (!(t_total > 0.0)) throw ValidationError("t_total must be positive");
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  if (n_exec < 1) throw ValidationError("n_exec must be >= 1");
  if (!(stall_factor > 0.0)) throw ValidationError("stall_factor must be positive");
  if (!(delta > 0.5) || !(delta < 1.0)) {
    throw ValidationError("delta must be in (0.5, 1)");
  }
  if (!(ell_min < 0.0) || !(ell_max > 0.0)) {
    throw ValidationError("belief clamp bounds must straddle zero");
  }
  if (map_from_file) {
    if (map_path.empty()) throw ValidationError("map_path required");
  } else {
    map_gen.validate();
  }
  fls.validate();
  flc.validate();
  dlc.validate();
  if (!(boustrophedon_spacing > 0.0)) {
    throw ValidationError("boustrophedon spacing must be positive");
  }
  if (local_cfg.dt != dt || mcts.dt != dt) {
    throw ValidationError("planner step sizes must match the mission dt");
  }
}

MissionConfig MissionConfig::defaults() { return MissionConfig{}; }

bool has_reached(const RobotState& state, const GlobalDirective& directive) {
  return directive.region.contains(state.position());
}

std::uint64_t MissionLog::determinism_digest() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* p, std::size_t n) { h = fnv1a64(p, n, h); };
  auto mix_d = [&mix](double v) { mix(&v, sizeof(v)); };
  auto mix_i = [&mix](std::int64_t v) { mix(&v, sizeof(v)); };

  mix(planner.data(), planner.size());
  mix_i(static_cast<std::int64_t>(seed));
  mix_d(t_total);
  mix_d(dt);
  mix_i(map_rows);
  mix_i(map_cols);
  mix_i(total_coral);
  mix_i(total_substrate);
  for (const auto& s : steps) {
    mix_d(s.t);
    mix_d(s.x);
    mix_d(s.y);
    mix_d(s.theta);
    mix_i(s.samples);
    mix_d(s.distance);
  }
  for (const auto& e : global_events) {
    mix_d(e.t);
    mix_i(e.n_nodes);
    mix_i(e.n_micro);
    mix_i(e.n_splits);
    mix_d(e.d_budget);
    mix_d(e.route_reward);
    mix_d(e.route_length);
    mix_i(e.route_size);
    mix_i(e.chosen_node);
    mix_d(e.t_local);
    mix_i(e.fallback ? 1 : 0);
    mix(e.cause.data(), e.cause.size());
  }
  for (const auto& e : local_events) {
    mix_d(e.t);
    mix_i(e.horizon);
    mix_i(e.iterations);
    mix_i(e.evaluations);
    mix_i(e.converged ? 1 : 0);
    mix_i(e.diverged ? 1 : 0);
    mix_d(e.cost);
    mix_d(e.j_scout);
    mix_d(e.j_samp);
    mix_d(e.j_reg);
  }
  for (const auto& e : mcts_events) {
    mix_d(e.t);
    mix_i(e.simulations);
    mix_d(e.root_value);
    mix_i(e.random_fallback ? 1 : 0);
  }
  mix_d(summary.final_t);
  mix_i(summary.steps);
  mix_i(summary.samples);
  mix_i(summary.total_coral);
  mix_d(summary.ratio_defined ? summary.ratio : -1.0);
  mix_d(summary.distance);
  return h;
}

namespace {

RobotState sample_start(const MissionConfig& cfg, const GridSpec& spec,
                        Rng& rng) {
  if (!cfg.start_auto) {
    RobotState s;
    s.x = cfg.start_x;
    s.y = cfg.start_y;
    s.theta = wrap_angle(cfg.start_theta);
    if (!spec.in_bounds(s.position())) {
      throw ValidationError("configured start pose outside the map");
    }
    return s;
  }
  const double mx = std::min(cfg.start_margin, 0.45 * spec.width_m);
  const double my = std::min(cfg.start_margin, 0.45 * spec.height_m);
  RobotState s;
  s.x = rng.uniform(mx, spec.width_m - mx);
  s.y = rng.uniform(my, spec.height_m - my);
  s.theta = wrap_angle(rng.uniform(-3.14159265358979323846,
                                   3.14159265358979323846));
  return s;
}

}  // namespace

MissionLog run_mission(const MissionConfig& config) {
  config.validate();

  const GroundTruth gt = config.map_from_file
                             ? load_map(config.map_path)
                             : generate_map(config.map_gen);
  const GridSpec& spec = gt.spec;

  Rng sensor_rng = Rng::substream(config.seed, "sensors");
  Rng start_rng = Rng::substream(config.seed, "start");
  Rng mcts_rng = Rng::substream(config.seed, "mcts");
  std::uint64_t op_seed_counter = 0;

  BeliefState belief =
      BeliefState::uniform_prior(spec, config.ell_min, config.ell_max);
  RobotState robot = sample_start(config, spec, start_rng);

  MissionLog log;
  log.planner = to_string(config.planner);
  log.seed = config.seed;
  log.difficulty = config.difficulty;
  log.t_total = config.t_total;
  log.dt = config.dt;
  log.map_rows = spec.rows;
  log.map_cols = spec.cols;
  log.cell_size = spec.cell_size;
  log.total_coral = gt.coral_count();
  log.total_substrate = gt.substrate_count();

  const int total_steps =
      static_cast<int>(std::floor(config.t_total / config.dt + 1e-9));

  SpatialGraph graph(spec, config.global_cfg.macro_size,
                     config.global_cfg.micro_size);
  std::optional<GlobalDirective> directive;
  double directive_issue_t = 0.0;
  std::vector<Control> warm;

  BoustrophedonController boustro(
      make_lawnmower_plan(spec, config.boustrophedon_spacing),
      config.local_cfg.v_max, config.local_cfg.omega_max);
  MctsPlanner mcts_planner(spec, config.fls, config.dlc, config.mcts);

  int samples = 0;
  double dist_total = 0.0;
  int step_i = 0;
  double t = 0.0;

  log.steps.push_back({0.0, robot.x, robot.y, robot.theta, 0, 0.0});
  if (config.planner == PlannerKind::kHimos) {
    graph.mark_visited_at(robot.position());
  }

  // Executes one simulation step: kinematics, wall clamping, sensing,
  // belief updates, sample accounting, logging. Returns the new samples.
  auto execute_step = [&](const Control& u) {
    const Vec2 before = robot.position();
    robot = kinematics_step(robot, u, config.dt);
    const double eps = 1e-9;
    robot.x = std::clamp(robot.x, 0.0, spec.width_m - eps);
    robot.y = std::clamp(robot.y, 0.0, spec.height_m - eps);
    dist_total += distance(before, robot.position());
    ++step_i;
    t = step_i * config.dt;

    for (const Observation& o : sample_scout(gt, robot, config.fls, sensor_rng)) {
      update_scout(belief, o, config.fls);
    }
    for (const Observation& o : sample_scout(gt, robot, config.flc, sensor_rng)) {
      update_scout(belief, o, config.flc);
    }
    for (const Observation& o : sample_dlc(gt, robot, config.dlc)) {
      samples += update_dlc(belief, o);
    }
    if (config.planner == PlannerKind::kHimos) {
      graph.mark_visited_at(robot.position());
    }
    log.steps.push_back({t, robot.x, robot.y, robot.theta, samples,
                         dist_total});
  };

  while (step_i < total_steps) {
    const int steps_remaining = total_steps - step_i;
    switch (config.planner) {
      case PlannerKind::kHimos: {
        const double t_rem = config.t_total - t;
        const char* cause = nullptr;
        if (!directive.has_value()) {
          cause = "start";
        } else if (has_reached(robot, *directive)) {
          cause = "reached";
        } else if (t - directive_issue_t >
                   config.stall_factor * directive->t_local) {
          cause = "stall";
        }
        if (cause != nullptr) {
          GlobalPlanRecord rec;
          rec.t = t;
          rec.cause = cause;
          directive = plan_global(
              robot, belief, graph, t_rem, config.dt, config.global_cfg,
              fnv1a64("op", config.seed + (op_seed_counter++)), &rec);
          log.global_events.push_back(rec);
          directive_issue_t = t;
          warm.clear();
        }

        const CandidateMap candidates = extract_candidates(belief, config.delta);
        LocalPlanRecord lrec;
        lrec.t = t;
        const TrajectoryPlan plan = optimize_trajectory(
            robot, belief, candidates, *directive, config.fls, config.flc,
            config.dlc, config.local_cfg, steps_remaining,
            warm.empty() ? nullptr : &warm, &lrec);
        log.local_events.push_back(lrec);

        const int burst = std::min({config.n_exec,
                                    static_cast<int>(plan.controls.size()),
                                    steps_remaining});
        int executed = 0;
        for (; executed < burst; ++executed) {
          execute_step(plan.controls[static_cast<std::size_t>(executed)]);
          if (has_reached(robot, *directive)) {
            ++executed;
            break;
          }
        }
        // Warm-start the next cycle with the unexecuted tail.
        warm.assign(plan.controls.begin() + executed, plan.controls.end());
        break;
      }
      case PlannerKind::kBoustrophedon: {
        execute_step(boustro.next_control(robot));
        break;
      }
      case PlannerKind::kMcts: {
        MctsRecord rec;
        rec.t = t;
        const Control u = mcts_planner.plan(robot, belief, mcts_rng, &rec);
        log.mcts_events.push_back(rec);
        execute_step(u);
        break;
      }
    }
  }

  log.summary.final_t = t;
  log.summary.steps = step_i;
  log.summary.samples = samples;
  log.summary.total_coral = log.total_coral;
  log.summary.ratio_defined = log.total_coral > 0;
  log.summary.ratio = log.summary.ratio_defined
                          ? static_cast<double>(samples) / log.total_coral
                          : 0.0;
  log.summary.distance = dist_total;
  log.summary.global_calls = static_cast<int>(log.global_events.size());
  log.summary.local_solves = static_cast<int>(log.local_events.size());
  log.summary.mcts_decisions = static_cast<int>(log.mcts_events.size());
  return log;
}

std::vector<RunResult> run_sweep(const std::vector<SweepItem>& items,
                                 int jobs) {
  if (items.empty()) throw ValidationError("sweep requires at least one run");
  jobs = std::clamp(jobs, 1, 64);
  std::vector<RunResult> results(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      RunResult& r = results[i];
      r.index = static_cast<int>(i);
      r.label = items[i].label;
      try {
        r.log = run_mission(items[i].config);
        r.ok = true;
      } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return results;
}

}  // namespace benthos
