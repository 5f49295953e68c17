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

#include "benthos/baselines.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>

namespace benthos {

LawnmowerPlan make_lawnmower_plan(const GridSpec& spec, double spacing) {
  if (!(spacing > 0.0)) throw ValidationError("swath spacing must be positive");
  LawnmowerPlan plan;
  plan.spacing = spacing;
  const double margin = 0.5 * spacing;
  const double y_lo = std::min(margin, 0.5 * spec.height_m);
  const double y_hi = std::max(spec.height_m - margin, y_lo);
  bool up = true;
  for (double x = margin; x < spec.width_m; x += spacing) {
    if (up) {
      plan.waypoints.push_back({x, y_lo});
      plan.waypoints.push_back({x, y_hi});
    } else {
      plan.waypoints.push_back({x, y_hi});
      plan.waypoints.push_back({x, y_lo});
    }
    up = !up;
  }
  return plan;
}

BoustrophedonController::BoustrophedonController(LawnmowerPlan plan,
                                                 double v_max,
                                                 double omega_max)
    : plan_(std::move(plan)), v_max_(v_max), omega_max_(omega_max) {}

Control BoustrophedonController::next_control(const RobotState& state) {
  if (!leg_started_) {
    leg_start_ = state.position();
    leg_started_ = true;
  }
  while (!finished()) {
    const Vec2 wp = plan_.waypoints[next_];
    if (distance(wp, state.position()) > arrival_tol) break;
    leg_start_ = wp;
    ++next_;
  }
  if (finished()) return Control{};
  const Vec2 wp = plan_.waypoints[next_];
  const double dist = distance(wp, state.position());

  const Vec2 leg = wp - leg_start_;
  const double leg_len = leg.norm();
  double course;
  if (leg_len > 1e-9) {
    const Vec2 t{leg.x / leg_len, leg.y / leg_len};
    // Signed lateral offset, positive left of the transect.
    const double cross = t.x * (state.y - leg_start_.y) -
                         t.y * (state.x - leg_start_.x);
    course = std::atan2(t.y, t.x) - std::atan(cross_track_gain * cross);
  } else {
    course = std::atan2(wp.y - state.y, wp.x - state.x);
  }
  const double err = wrap_angle(course - state.theta);
  Control u;
  u.omega = std::clamp(heading_gain * err, -omega_max_, omega_max_);
  u.vx = v_max_ * std::max(0.0, std::cos(err)) *
         std::min(1.0, dist / slow_radius);
  return u;
}

// ---------------------------------------------------------------------------
// MCTS

std::vector<Control> MctsConfig::actions() const {
  const double vd = v / 1.4142135623730951;
  return {
      {v, 0.0, 0.0},    {0.0, v, 0.0},      {0.0, -v, 0.0},
      {vd, vd, 0.0},    {vd, -vd, 0.0},     {v, 0.0, omega / 2.0},
      {v, 0.0, -omega / 2.0}, {v, 0.0, omega}, {v, 0.0, -omega},
  };
}

struct MctsPlanner::Node {
  RobotState state;
  int visits = 0;
  double value_sum = 0.0;
  int n_expanded = 0;
  std::array<int, 9> children;
  Node() { children.fill(-1); }
};

MctsPlanner::MctsPlanner(const GridSpec& grid, const ScoutSensorSpec& fls,
                         const DlcSpec& dlc, const MctsConfig& cfg)
    : grid_(grid), fls_(fls), dlc_(dlc), cfg_(cfg), actions_(cfg.actions()) {
  int pooling = std::max(1, cfg_.pooling);
  while (grid_.rows % pooling != 0 || grid_.cols % pooling != 0) --pooling;
  coarse_ = GridSpec::make(grid_.width_m, grid_.height_m,
                           grid_.cell_size * pooling);
}

RobotState MctsPlanner::apply(const RobotState& state, const Control& u) const {
  RobotState x = kinematics_step(state, u, cfg_.dt);
  const double eps = 1e-9;
  x.x = std::clamp(x.x, 0.0, grid_.width_m - eps);
  x.y = std::clamp(x.y, 0.0, grid_.height_m - eps);
  return x;
}

double MctsPlanner::step_reward(const RobotState& state) {
  // Hot path: runs once per rollout step, so the membership tests are
  // inlined over index windows with the heading trig hoisted and no
  // allocation.
  const double ch = std::cos(state.theta);
  const double sh = std::sin(state.theta);
  double reward = 0.0;

  // Expected sampling gain: candidate probability mass newly swept by the
  // DLC footprint within this simulation.
  {
    const double hl = 0.5 * dlc_.side_len;
    const double reach = hl * 1.4142135623730951 + 1e-12;
    const double d = grid_.cell_size;
    const int c0 = std::max(0, static_cast<int>((state.x - reach) / d));
    const int c1 = std::min(grid_.cols - 1,
                            static_cast<int>((state.x + reach) / d));
    const int r0 = std::max(0, static_cast<int>((state.y - reach) / d));
    const int r1 = std::min(grid_.rows - 1,
                            static_cast<int>((state.y + reach) / d));
    for (int row = r0; row <= r1; ++row) {
      const double dy = (row + 0.5) * d - state.y;
      for (int col = c0; col <= c1; ++col) {
        const double dx = (col + 0.5) * d - state.x;
        const double lon = ch * dx + sh * dy;
        const double lat = -sh * dx + ch * dy;
        if (std::abs(lon) > hl || std::abs(lat) > hl) continue;
        const std::size_t i = static_cast<std::size_t>(grid_.index(row, col));
        if (swept_[i]) continue;
        swept_[i] = 1;
        swept_undo_.push_back(static_cast<int>(i));
        reward += prob_c_[i];
      }
    }
  }

  // One-shot scan bonus for coarse sonar cells first covered in this
  // simulation. The bearing test is the squared-cosine comparison, valid
  // for half angles up to 90 degrees.
  if (cfg_.info_bonus > 0.0) {
    const double r = fls_.r_max;
    const double r2 = r * r;
    const double cos_half = std::cos(fls_.half_angle_rad());
    const double cos2 = cos_half * cos_half;
    const double d = coarse_.cell_size;
    const int c0 = std::max(0, static_cast<int>((state.x - r) / d));
    const int c1 =
        std::min(coarse_.cols - 1, static_cast<int>((state.x + r) / d));
    const int r0 = std::max(0, static_cast<int>((state.y - r) / d));
    const int r1 =
        std::min(coarse_.rows - 1, static_cast<int>((state.y + r) / d));
    for (int row = r0; row <= r1; ++row) {
      const double dy = (row + 0.5) * d - state.y;
      for (int col = c0; col <= c1; ++col) {
        const double dx = (col + 0.5) * d - state.x;
        const double d2 = dx * dx + dy * dy;
        if (d2 > r2) continue;
        const double proj = dx * ch + dy * sh;
        if (d2 > 0.0) {
          if (cos_half >= 0.0) {
            if (proj < 0.0 || proj * proj < cos2 * d2) continue;
          } else if (proj < 0.0 && proj * proj > cos2 * d2) {
            continue;
          }
        }
        const std::size_t i = static_cast<std::size_t>(coarse_.index(row, col));
        if (scanned_[i]) continue;
        scanned_[i] = 1;
        scanned_undo_.push_back(static_cast<int>(i));
        reward += info_gain_[i];
      }
    }
  }
  return reward;
}

double MctsPlanner::simulate(std::vector<Node>& tree, std::size_t node_idx,
                             int depth, Rng& rng) {
  if (depth >= cfg_.rollout_depth) return 0.0;
  Node& node = tree[node_idx];

  // Expansion: visit each child once before descending by UCT.
  if (node.n_expanded < static_cast<int>(actions_.size())) {
    const int a = node.n_expanded++;
    const RobotState next =
        apply(node.state, actions_[static_cast<std::size_t>(a)]);
    tree.emplace_back();
    const int child_idx = static_cast<int>(tree.size()) - 1;
    tree[node_idx].children[static_cast<std::size_t>(a)] = child_idx;
    tree[child_idx].state = next;

    double value = step_reward(next);
    // Random playout from the new leaf.
    RobotState x = next;
    double gamma = cfg_.discount;
    for (int d = depth + 1; d < cfg_.rollout_depth; ++d) {
      x = apply(x, actions_[rng.uniform_int(actions_.size())]);
      value += gamma * step_reward(x);
      gamma *= cfg_.discount;
    }
    Node& child = tree[static_cast<std::size_t>(child_idx)];
    child.visits += 1;
    child.value_sum += value;
    return value;
  }

  // Selection.
  int best_a = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  const double log_n = std::log(static_cast<double>(std::max(1, node.visits)));
  for (std::size_t a = 0; a < actions_.size(); ++a) {
    const Node& child = tree[static_cast<std::size_t>(node.children[a])];
    const double mean = child.value_sum / std::max(1, child.visits);
    const double score =
        mean + cfg_.c_uct * std::sqrt(log_n / std::max(1, child.visits));
    if (score > best_score) {
      best_score = score;
      best_a = static_cast<int>(a);
    }
  }
  const int child_idx = node.children[static_cast<std::size_t>(best_a)];
  const double r =
      step_reward(tree[static_cast<std::size_t>(child_idx)].state);
  const double value =
      r + cfg_.discount *
              simulate(tree, static_cast<std::size_t>(child_idx), depth + 1,
                       rng);
  Node& child = tree[static_cast<std::size_t>(child_idx)];
  child.visits += 1;
  child.value_sum += value;
  return value;
}

Control MctsPlanner::plan(const RobotState& state, const BeliefState& belief,
                          Rng& rng, MctsRecord* record) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();

  // Snapshot caches.
  const std::size_t n = belief.ell_c.size();
  prob_c_.resize(n);
  swept_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    prob_c_[i] = belief.xi[i] ? 0.0 : sigmoid(belief.ell_c[i]);
    swept_[i] = belief.xi[i];
  }
  const int pooling =
      static_cast<int>(std::lround(coarse_.cell_size / grid_.cell_size));
  const ActiveMap act = build_active_map(belief, pooling);
  const double eta_mid = evidence_magnitude_exact(0.5 * fls_.r_max, fls_);
  info_gain_.resize(act.lambda0_fls.size());
  scanned_.assign(act.lambda0_fls.size(), 0);
  for (std::size_t i = 0; i < info_gain_.size(); ++i) {
    info_gain_[i] = cfg_.info_bonus * (h_proxy(act.lambda0_fls[i]) -
                                       h_proxy(act.lambda0_fls[i] + eta_mid));
  }

  std::vector<Node> tree;
  tree.reserve(static_cast<std::size_t>(cfg_.n_sims) + 64);
  tree.emplace_back();
  tree[0].state = state;

  int sims = 0;
  const bool timed = cfg_.time_cap_s > 0.0;
  for (;;) {
    if (timed) {
      const double el = std::chrono::duration<double>(Clock::now() - t0).count();
      if (el >= cfg_.time_cap_s) break;
    } else if (sims >= cfg_.n_sims) {
      break;
    }
    swept_undo_.clear();
    scanned_undo_.clear();
    const double value = simulate(tree, 0, 0, rng);
    tree[0].visits += 1;
    tree[0].value_sum += value;
    for (int c : swept_undo_) swept_[static_cast<std::size_t>(c)] =
        belief.xi[static_cast<std::size_t>(c)];
    for (int c : scanned_undo_) scanned_[static_cast<std::size_t>(c)] = 0;
    ++sims;
  }

  Control chosen;
  bool fallback = false;
  if (sims == 0 || tree[0].n_expanded == 0) {
    chosen = actions_[rng.uniform_int(actions_.size())];
    fallback = true;
  } else {
    // Max visit count; ties broken uniformly at random.
    int best_visits = -1;
    std::vector<std::size_t> argmax;
    for (std::size_t a = 0; a < actions_.size(); ++a) {
      const int ci = tree[0].children[a];
      if (ci < 0) continue;
      const int v = tree[static_cast<std::size_t>(ci)].visits;
      if (v > best_visits) {
        best_visits = v;
        argmax.assign(1, a);
      } else if (v == best_visits) {
        argmax.push_back(a);
      }
    }
    chosen = actions_[argmax[rng.uniform_int(argmax.size())]];
  }

  if (record != nullptr) {
    record->simulations = sims;
    record->root_value =
        sims > 0 ? tree[0].value_sum / tree[0].visits : 0.0;
    record->random_fallback = fallback;
    record->solve_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  }
  return chosen;
}

}  // namespace benthos
