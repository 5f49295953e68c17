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

// Microbenchmarks for the hot paths: belief updates, the cost/gradient
// evaluation, the orienteering solver, and GP fitting.

#include <benchmark/benchmark.h>

#include "benthos/belief.hpp"
#include "benthos/gp.hpp"
#include "benthos/local_planner.hpp"
#include "benthos/orienteering.hpp"
#include "benthos/rng.hpp"
#include "benthos/world.hpp"

namespace {

using namespace benthos;

void BM_ScoutBeliefUpdate(benchmark::State& state) {
  MapGenConfig mc;
  mc.seed = 3;
  const GroundTruth gt = generate_map(mc);
  BeliefState belief = BeliefState::uniform_prior(gt.spec);
  const ScoutSensorSpec fls = ScoutSensorSpec::fls_default();
  Rng rng(1);
  const RobotState x{25.0, 25.0, 0.7};
  const auto batch = sample_scout(gt, x, fls, rng);
  for (auto _ : state) {
    for (const auto& o : batch) update_scout(belief, o, fls);
    benchmark::DoNotOptimize(belief.ell_s.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(batch.size()));
}
BENCHMARK(BM_ScoutBeliefUpdate);

void BM_CostGradient(benchmark::State& state) {
  const int horizon = static_cast<int>(state.range(0));
  Rng rng(11);
  const GridSpec spec = GridSpec::make(50.0, 50.0, 0.25);
  BeliefState belief = BeliefState::uniform_prior(spec);
  for (auto& e : belief.ell_s) e = rng.uniform(-2.0, 2.0);
  for (auto& e : belief.ell_c) e = rng.uniform(-2.0, 2.0);
  CandidateMap cands = extract_candidates(belief, 0.8);
  GlobalDirective d;
  d.target = {30.0, 30.0};
  d.t_local = horizon * 0.5;
  LocalPlannerConfig cfg;
  const CostContext ctx = build_cost_context(
      {25.0, 25.0, 0.3}, belief, cands, d, ScoutSensorSpec::fls_default(),
      ScoutSensorSpec::flc_default(), DlcSpec{}, cfg, 1 << 20);
  std::vector<Control> u(static_cast<std::size_t>(ctx.horizon),
                         Control{0.3, 0.1, 0.2});
  std::vector<Control> g(u.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(cost_and_grad(ctx, u, g, nullptr));
  }
  state.counters["active_cells"] =
      static_cast<double>(ctx.fls.centers.size() + ctx.flc.centers.size());
}
BENCHMARK(BM_CostGradient)->Arg(20)->Arg(40);

void BM_LocalSolve(benchmark::State& state) {
  Rng rng(13);
  const GridSpec spec = GridSpec::make(50.0, 50.0, 0.25);
  BeliefState belief = BeliefState::uniform_prior(spec);
  for (auto& e : belief.ell_s) e = rng.uniform(-1.0, 1.0);
  CandidateMap cands;
  cands.flags.assign(belief.ell_c.size(), 0);
  GlobalDirective d;
  d.target = {32.0, 28.0};
  d.t_local = 20.0;
  LocalPlannerConfig cfg;
  const CostContext ctx = build_cost_context(
      {25.0, 25.0, 0.0}, belief, cands, d, ScoutSensorSpec::fls_default(),
      ScoutSensorSpec::flc_default(), DlcSpec{}, cfg, 1 << 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_trajectory(ctx, cfg));
  }
}
BENCHMARK(BM_LocalSolve)->Unit(benchmark::kMillisecond);

void BM_SolveOp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(7);
  std::vector<OpNode> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back({i, {rng.uniform(0.0, 50.0), rng.uniform(0.0, 50.0)},
                     rng.uniform(0.1, 3.2)});
  }
  OpParams params;
  params.seed = 5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_op(nodes, {25.0, 25.0}, 120.0, params));
  }
}
BENCHMARK(BM_SolveOp)->Arg(50)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_GpFitPredict(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Rng rng(9);
  std::vector<GpObservation> data;
  for (int i = 0; i < m; ++i) {
    data.push_back({{rng.uniform(0.0, 50.0), rng.uniform(0.0, 50.0)},
                    rng.uniform(0.0, 1.0),
                    rng.uniform(0.01, 0.25)});
  }
  std::vector<Vec2> queries;
  for (int i = 0; i < 200; ++i) {
    queries.push_back({rng.uniform(0.0, 50.0), rng.uniform(0.0, 50.0)});
  }
  for (auto _ : state) {
    const GpModel model = GpModel::fit(data, GpConfig{});
    benchmark::DoNotOptimize(model.predict(queries));
  }
}
BENCHMARK(BM_GpFitPredict)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
