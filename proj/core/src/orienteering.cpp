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

#include "benthos/orienteering.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "benthos/rng.hpp"

namespace benthos {

double route_length(const std::vector<OpNode>& nodes, const Vec2& start,
                    const std::vector<int>& order) {
  double len = 0.0;
  Vec2 prev = start;
  for (int idx : order) {
    const Vec2 p = nodes[static_cast<std::size_t>(idx)].position;
    len += distance(prev, p);
    prev = p;
  }
  return len;
}

double route_reward(const std::vector<OpNode>& nodes,
                    const std::vector<int>& order) {
  double r = 0.0;
  for (int idx : order) r += nodes[static_cast<std::size_t>(idx)].reward;
  return r;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Instance {
  const std::vector<OpNode>& nodes;
  Vec2 start;
  double budget;

  double dist(int a, int b) const {  // -1 denotes the start position
    const Vec2 pa = a < 0 ? start : nodes[static_cast<std::size_t>(a)].position;
    const Vec2 pb = b < 0 ? start : nodes[static_cast<std::size_t>(b)].position;
    return distance(pa, pb);
  }
};

struct Solution {
  std::vector<int> order;
  double reward = 0.0;
  double length = 0.0;

  void refresh(const Instance& in) {
    reward = route_reward(in.nodes, order);
    length = route_length(in.nodes, in.start, order);
  }

  // Better = more reward; ties broken toward shorter routes. Both
  // comparisons are exact, so scaling all rewards by a positive constant
  // cannot change any decision.
  bool better_than(const Solution& o) const {
    if (reward != o.reward) return reward > o.reward;
    return length < o.length;
  }
};

struct InsertChoice {
  int node = -1;
  std::size_t position = 0;
  double delta_len = 0.0;
  double score = 0.0;
  bool valid() const { return node >= 0; }
};

// Cheapest feasible insertion position for `node`, or invalid.
InsertChoice best_insertion(const Instance& in, const Solution& sol,
                            int node) {
  InsertChoice best;
  const double reward = in.nodes[static_cast<std::size_t>(node)].reward;
  for (std::size_t pos = 0; pos <= sol.order.size(); ++pos) {
    const int before = pos == 0 ? -1 : sol.order[pos - 1];
    const double d_before = in.dist(before, node);
    double delta;
    if (pos == sol.order.size()) {
      delta = d_before;
    } else {
      const int after = sol.order[pos];
      delta = d_before + in.dist(node, after) - in.dist(before, after);
    }
    if (sol.length + delta > in.budget) continue;
    if (!best.valid() || delta < best.delta_len) {
      best.node = node;
      best.position = pos;
      best.delta_len = delta;
    }
  }
  if (best.valid()) {
    best.score = reward / std::max(best.delta_len, 1e-9);
  }
  return best;
}

void apply_insertion(const Instance& in, Solution& sol,
                     const InsertChoice& c) {
  sol.order.insert(sol.order.begin() + static_cast<std::ptrdiff_t>(c.position),
                   c.node);
  sol.refresh(in);  // fresh recompute keeps feasibility exact, no drift
}

std::vector<std::uint8_t> routed_mask(const Instance& in,
                                      const Solution& sol) {
  std::vector<std::uint8_t> mask(in.nodes.size(), 0);
  for (int idx : sol.order) mask[static_cast<std::size_t>(idx)] = 1;
  return mask;
}

// Insert nodes until no feasible insertion remains. With rng == nullptr the
// choice is the pure greedy argmax; otherwise a GRASP restricted candidate
// list of relative width `alpha` is sampled.
void construct(const Instance& in, Solution& sol, Rng* rng, double alpha) {
  auto routed = routed_mask(in, sol);
  for (;;) {
    std::vector<InsertChoice> feasible;
    double smax = -std::numeric_limits<double>::infinity();
    double smin = std::numeric_limits<double>::infinity();
    for (int node = 0; node < static_cast<int>(in.nodes.size()); ++node) {
      if (routed[static_cast<std::size_t>(node)]) continue;
      if (in.nodes[static_cast<std::size_t>(node)].reward <= 0.0) continue;
      const InsertChoice c = best_insertion(in, sol, node);
      if (!c.valid()) continue;
      feasible.push_back(c);
      smax = std::max(smax, c.score);
      smin = std::min(smin, c.score);
    }
    if (feasible.empty()) return;

    const InsertChoice* chosen = nullptr;
    if (rng == nullptr) {
      for (const auto& c : feasible) {
        if (chosen == nullptr || c.score > chosen->score) chosen = &c;
      }
    } else {
      const double cut = smax - alpha * (smax - smin);
      std::vector<const InsertChoice*> rcl;
      for (const auto& c : feasible) {
        if (c.score >= cut) rcl.push_back(&c);
      }
      chosen = rcl[rng->uniform_int(rcl.size())];
    }
    apply_insertion(in, sol, *chosen);
    routed[static_cast<std::size_t>(chosen->node)] = 1;
  }
}

// 2-opt: reverse a sub-segment when it shortens the open path.
bool two_opt_pass(const Instance& in, Solution& sol) {
  const std::size_t n = sol.order.size();
  if (n < 3) return false;
  bool improved = false;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int before = i == 0 ? -1 : sol.order[i - 1];
      const int a = sol.order[i];
      const int b = sol.order[j];
      const double old_edges =
          in.dist(before, a) +
          (j + 1 < n ? in.dist(b, sol.order[j + 1]) : 0.0);
      const double new_edges =
          in.dist(before, b) +
          (j + 1 < n ? in.dist(a, sol.order[j + 1]) : 0.0);
      if (new_edges < old_edges - 1e-12) {
        std::reverse(sol.order.begin() + static_cast<std::ptrdiff_t>(i),
                     sol.order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        sol.refresh(in);
        improved = true;
      }
    }
  }
  return improved;
}

// Or-opt: relocate segments of length 1..3 when it shortens the path.
// Candidate lengths use O(1) three-edge deltas; the winning move is applied
// and re-verified with a fresh sum.
bool or_opt_pass(const Instance& in, Solution& sol) {
  const std::size_t n = sol.order.size();
  if (n < 2) return false;
  auto node_at = [&](std::ptrdiff_t idx) {  // -1 is the start position
    return idx < 0 ? -1 : sol.order[static_cast<std::size_t>(idx)];
  };
  for (std::size_t seg_len = 1; seg_len <= std::min<std::size_t>(3, n - 1);
       ++seg_len) {
    for (std::size_t i = 0; i + seg_len <= n; ++i) {
      const int before = node_at(static_cast<std::ptrdiff_t>(i) - 1);
      const int seg_first = sol.order[i];
      const int seg_last = sol.order[i + seg_len - 1];
      const bool has_after = i + seg_len < n;
      const int after = has_after ? sol.order[i + seg_len] : -1;
      // Cost change of removing the segment.
      double remove_delta = -in.dist(before, seg_first);
      if (has_after) {
        remove_delta += in.dist(before, after) - in.dist(seg_last, after);
      }
      std::vector<int> rest;
      rest.reserve(n - seg_len);
      for (std::size_t k = 0; k < n; ++k) {
        if (k < i || k >= i + seg_len) rest.push_back(sol.order[k]);
      }
      const double rest_len = sol.length + remove_delta;
      for (std::size_t pos = 0; pos <= rest.size(); ++pos) {
        const int b = pos == 0 ? -1 : rest[pos - 1];
        const int a = pos < rest.size() ? rest[pos] : seg_last;  // sentinel
        double insert_delta = in.dist(b, seg_first);
        if (pos < rest.size()) {
          insert_delta += in.dist(seg_last, a) - in.dist(b, a);
        }
        const double len = rest_len + insert_delta;
        if (len < sol.length - 1e-12) {
          std::vector<int> trial(rest);
          trial.insert(trial.begin() + static_cast<std::ptrdiff_t>(pos),
                       sol.order.begin() + static_cast<std::ptrdiff_t>(i),
                       sol.order.begin() +
                           static_cast<std::ptrdiff_t>(i + seg_len));
          if (route_length(in.nodes, in.start, trial) <
              sol.length - 1e-12) {
            sol.order = std::move(trial);
            sol.refresh(in);
            return true;
          }
        }
      }
    }
  }
  return false;
}

// Replace: exchange one routed node for an unrouted one when it raises the
// collected reward (or keeps it while shortening the path). Candidate
// lengths use O(1) two-edge deltas; the accepted move is re-verified with a
// fresh sum so incremental drift can never leak an infeasible route.
bool replace_pass(const Instance& in, Solution& sol) {
  auto routed = routed_mask(in, sol);
  for (std::size_t i = 0; i < sol.order.size(); ++i) {
    const int old_node = sol.order[i];
    const double old_reward =
        in.nodes[static_cast<std::size_t>(old_node)].reward;
    const int before = i == 0 ? -1 : sol.order[i - 1];
    const int after =
        i + 1 < sol.order.size() ? sol.order[i + 1] : old_node;
    const double old_edges =
        in.dist(before, old_node) +
        (i + 1 < sol.order.size() ? in.dist(old_node, after) : 0.0);
    for (int j = 0; j < static_cast<int>(in.nodes.size()); ++j) {
      if (routed[static_cast<std::size_t>(j)]) continue;
      const double new_reward = in.nodes[static_cast<std::size_t>(j)].reward;
      if (new_reward <= 0.0) continue;
      if (new_reward < old_reward) continue;
      const double new_edges =
          in.dist(before, j) +
          (i + 1 < sol.order.size() ? in.dist(j, after) : 0.0);
      const double len = sol.length - old_edges + new_edges;
      if (len > in.budget) continue;
      if (new_reward > old_reward ||
          (new_reward == old_reward && len < sol.length - 1e-12)) {
        std::vector<int> trial = sol.order;
        trial[i] = j;
        if (route_length(in.nodes, in.start, trial) > in.budget) continue;
        sol.order = std::move(trial);
        sol.refresh(in);
        return true;
      }
    }
  }
  return false;
}

void local_search(const Instance& in, Solution& sol) {
  for (;;) {
    bool changed = false;
    changed |= two_opt_pass(in, sol);
    while (or_opt_pass(in, sol)) changed = true;
    while (replace_pass(in, sol)) changed = true;
    // Length savings above may have opened budget slack for more nodes.
    const std::size_t before = sol.order.size();
    construct(in, sol, nullptr, 0.0);
    changed |= sol.order.size() != before;
    if (!changed) return;
  }
}

void perturb(const Instance& in, Solution& sol, Rng& rng) {
  if (sol.order.empty()) return;
  const std::size_t n = sol.order.size();
  const std::size_t seg =
      1 + rng.uniform_int(std::min<std::size_t>(3, n));
  const std::size_t at = rng.uniform_int(n - seg + 1);
  sol.order.erase(sol.order.begin() + static_cast<std::ptrdiff_t>(at),
                  sol.order.begin() + static_cast<std::ptrdiff_t>(at + seg));
  sol.refresh(in);
}

}  // namespace

OpRoute greedy_route(const std::vector<OpNode>& nodes, const Vec2& start,
                     double d_budget) {
  Instance in{nodes, start, d_budget};
  Solution sol;
  if (d_budget >= 0.0) {
    construct(in, sol, nullptr, 0.0);
    local_search(in, sol);
  }
  return {sol.order, sol.reward, sol.length};
}

OpRoute solve_op(const std::vector<OpNode>& nodes, const Vec2& start,
                 double d_budget, const OpParams& params) {
  if (d_budget < 0.0) throw ValidationError("d_budget must be >= 0");
  Instance in{nodes, start, d_budget};
  Rng rng = Rng::substream(params.seed, "op-ils");

  // The greedy construction is the contractual floor; start from it so the
  // final answer can never fall below.
  Solution best;
  construct(in, best, nullptr, 0.0);
  local_search(in, best);

  Solution current = best;
  const auto t0 = Clock::now();
  int stale = 0;
  for (int iter = 0; iter < params.max_total_iters; ++iter) {
    if (stale >= params.max_stale_iters) break;
    if (params.time_cap_s > 0.0) {
      const double elapsed =
          std::chrono::duration<double>(Clock::now() - t0).count();
      if (elapsed >= params.time_cap_s) break;
    }

    Solution trial;
    if (rng.uniform() < 0.2) {
      // Fresh randomized-greedy restart.
      construct(in, trial, &rng, params.grasp_alpha);
    } else {
      trial = current;
      perturb(in, trial, rng);
      construct(in, trial, &rng, params.grasp_alpha);
    }
    local_search(in, trial);

    if (trial.better_than(current)) current = trial;
    if (trial.better_than(best)) {
      best = trial;
      stale = 0;
    } else {
      ++stale;
    }
  }
  return {best.order, best.reward, best.length};
}

}  // namespace benthos
