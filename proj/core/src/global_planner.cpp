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

#include "benthos/global_planner.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace benthos {

std::vector<double> node_rewards(const SpatialGraph& graph,
                                 const GpModel& model, double beta) {
  if (beta < 0.0) throw ValidationError("beta must be >= 0");
  std::vector<double> rewards;
  rewards.reserve(graph.nodes().size());
  for (const auto& node : graph.nodes()) {
    if (node.visited) {
      rewards.push_back(0.0);
      continue;
    }
    const GpPrediction p = model.predict(node.center);
    rewards.push_back((p.mean + beta * std::sqrt(p.variance)) *
                      node.area_weight);
  }
  return rewards;
}

GlobalDirective plan_global(const RobotState& state, const BeliefState& belief,
                            SpatialGraph& graph, double t_rem, double dt,
                            const GlobalPlannerConfig& cfg,
                            std::uint64_t op_seed, GlobalPlanRecord* record) {
  if (!(t_rem > 0.0)) throw ValidationError("plan_global requires t_rem > 0");
  const auto t0 = std::chrono::steady_clock::now();

  const int splits = graph.maybe_split(belief, cfg.h_split);

  // Fresh aggregated statistics for micro nodes; they alone train the GP.
  std::vector<GpObservation> data;
  for (auto& node : graph.nodes()) {
    if (node.level != NodeLevel::kMicro) continue;
    const auto cells = graph.region_cells(node);
    if (cells.empty()) continue;
    const RegionStats st = region_stats(belief, cells);
    node.rho_bar = st.rho_bar;
    node.nu2_bar = st.nu2_bar;
    data.push_back({node.center, st.rho_bar, st.nu2_bar});
  }
  const GpModel gp = GpModel::fit(data, cfg.gp);
  const std::vector<double> rewards = node_rewards(graph, gp, cfg.beta);

  std::vector<OpNode> op_nodes;
  op_nodes.reserve(graph.nodes().size());
  for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
    if (rewards[i] <= 0.0) continue;  // visited nodes carry zero reward
    op_nodes.push_back({graph.nodes()[i].id, graph.nodes()[i].center,
                        rewards[i]});
  }

  const double d_budget = t_rem / cfg.c_factor;
  OpParams op = cfg.op;
  op.seed = op_seed;
  const OpRoute route = solve_op(op_nodes, state.position(), d_budget, op);

  GlobalDirective directive;
  if (!route.order.empty()) {
    const OpNode& first = op_nodes[static_cast<std::size_t>(route.order[0])];
    const GraphNode* node = graph.find(first.id);
    directive.node_id = first.id;
    directive.target = node->center;
    directive.region = node->region;
  } else {
    // Budget admits no routed node: head for the nearest unvisited node,
    // or the nearest node outright once everything is visited.
    directive.fallback = true;
    const GraphNode* pick = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (int pass = 0; pass < 2 && pick == nullptr; ++pass) {
      for (const auto& node : graph.nodes()) {
        if (pass == 0 && node.visited) continue;
        const double d = distance(state.position(), node.center);
        if (d < best_d) {
          best_d = d;
          pick = &node;
        }
      }
    }
    directive.node_id = pick->id;
    directive.target = pick->center;
    directive.region = pick->region;
  }
  const double dist_to_target = distance(state.position(), directive.target);
  directive.t_local =
      std::clamp(cfg.c_factor * dist_to_target, dt, t_rem);

  if (record != nullptr) {
    record->n_nodes = static_cast<int>(graph.nodes().size());
    record->n_micro = graph.micro_count();
    record->n_splits = splits;
    record->d_budget = d_budget;
    record->route_reward = route.reward;
    record->route_length = route.length;
    record->route_size = static_cast<int>(route.order.size());
    record->chosen_node = directive.node_id;
    record->t_local = directive.t_local;
    record->fallback = directive.fallback;
    record->solve_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
  }
  return directive;
}

}  // namespace benthos
