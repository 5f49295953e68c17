#include <algorithm>
#include <set>

#include <doctest.h>

#include "benthos/global_planner.hpp"
#include "benthos/spatial_graph.hpp"

using namespace benthos;

namespace {

constexpr double kLn2 = 0.6931471805599453;

BeliefState prior(const GridSpec& spec) {
  return BeliefState::uniform_prior(spec);
}

}  // namespace

TEST_CASE("fresh beliefs produce zero splits") {
  const GridSpec spec = GridSpec::make(16.0, 16.0, 0.25);
  SpatialGraph g(spec, 4.0, 2.0);
  BeliefState b = prior(spec);
  CHECK(g.maybe_split(b, 0.35) == 0);
  CHECK(g.macro_count() == 16);
  CHECK(g.micro_count() == 0);
}

TEST_CASE("a converged macro region splits into four micro children") {
  const GridSpec spec = GridSpec::make(8.0, 8.0, 0.25);
  SpatialGraph g(spec, 4.0, 2.0);
  BeliefState b = prior(spec);
  // Converge the lower-left 4 m block only.
  for (int c : cells_in_region(spec, {0, 0, 4, 4})) {
    b.ell_s[static_cast<std::size_t>(c)] = 10.0;
  }
  const auto before = g.nodes();
  const GraphNode parent = *std::find_if(
      before.begin(), before.end(),
      [](const GraphNode& n) { return n.region.contains({1.0, 1.0}); });

  CHECK(g.maybe_split(b, 0.35) == 1);
  CHECK(g.macro_count() == 3);
  CHECK(g.micro_count() == 4);

  // Children tile the parent region exactly: same cells, no overlap.
  std::vector<int> parent_cells = cells_in_region(spec, parent.region);
  std::vector<int> child_cells;
  for (const auto& n : g.nodes()) {
    if (n.level != NodeLevel::kMicro) continue;
    CHECK(n.region.width() == doctest::Approx(2.0));
    CHECK(n.area_weight == doctest::Approx(1.0));
    const auto cells = g.region_cells(n);
    child_cells.insert(child_cells.end(), cells.begin(), cells.end());
  }
  std::sort(parent_cells.begin(), parent_cells.end());
  std::sort(child_cells.begin(), child_cells.end());
  CHECK(parent_cells == child_cells);
}

TEST_CASE("macro count is monotone non-increasing over a mission") {
  const GridSpec spec = GridSpec::make(12.0, 12.0, 0.25);
  SpatialGraph g(spec, 4.0, 2.0);
  BeliefState b = prior(spec);
  int prev = g.macro_count();
  Rng rng(3);
  for (int round = 0; round < 10; ++round) {
    for (int i = 0; i < 400; ++i) {
      b.ell_s[rng.uniform_int(b.ell_s.size())] = rng.uniform(-10.0, 10.0);
    }
    g.maybe_split(b, 0.35);
    CHECK(g.macro_count() <= prev);
    prev = g.macro_count();
  }
}

TEST_CASE("clipped edge regions keep the partition exact") {
  // 50 m / 4 m = 12.5 macro columns: the last column is 2 m wide.
  const GridSpec spec = GridSpec::make(50.0, 50.0, 0.25);
  SpatialGraph g(spec, 4.0, 2.0);
  std::vector<std::uint8_t> covered(static_cast<std::size_t>(spec.cell_count()), 0);
  for (const auto& n : g.nodes()) {
    for (int c : g.region_cells(n)) {
      CHECK(covered[static_cast<std::size_t>(c)] == 0);
      covered[static_cast<std::size_t>(c)] = 1;
    }
  }
  CHECK(std::count(covered.begin(), covered.end(), 1) == spec.cell_count());
  // Full macro nodes weigh 4 nominal micro areas; the clipped column half.
  double max_w = 0.0, min_w = 1e9;
  for (const auto& n : g.nodes()) {
    max_w = std::max(max_w, n.area_weight);
    min_w = std::min(min_w, n.area_weight);
  }
  CHECK(max_w == doctest::Approx(4.0));
  CHECK(min_w == doctest::Approx(1.0));  // 2x2 corner region
}

TEST_CASE("node rewards follow the UCB-area-visited composite") {
  const GridSpec spec = GridSpec::make(8.0, 8.0, 0.25);
  SpatialGraph g(spec, 4.0, 2.0);
  // Empty-data GP: mu = 0.5, sigma = 0.5 everywhere.
  const GpModel gp = GpModel::fit({}, GpConfig{});
  auto rewards = node_rewards(g, gp, 0.6);
  REQUIRE(rewards.size() == g.nodes().size());
  for (double r : rewards) {
    CHECK(r == doctest::Approx((0.5 + 0.6 * 0.5) * 4.0));  // macro area 4
  }
  // Micro-sized region: lambda = 1 -> r = 0.8.
  SpatialGraph micro_only(GridSpec::make(2.0, 2.0, 0.25), 2.0, 2.0);
  rewards = node_rewards(micro_only, gp, 0.6);
  CHECK(rewards[0] == doctest::Approx(0.8));
  // Visited nodes score exactly zero.
  g.mark_visited_at({1.0, 1.0});
  rewards = node_rewards(g, gp, 0.6);
  int zeros = 0;
  for (double r : rewards) zeros += r == 0.0;
  CHECK(zeros == 1);
}

TEST_CASE("plan_global maps budgets and picks the brute-force-best route head") {
  const GridSpec spec = GridSpec::make(12.0, 12.0, 0.25);
  BeliefState b = prior(spec);
  SpatialGraph g(spec, 4.0, 2.0);  // 9 macro nodes, brute-forceable
  GlobalPlannerConfig cfg;

  RobotState s{0.5, 0.5, 0.0};
  GlobalPlanRecord rec;
  const GlobalDirective d =
      plan_global(s, b, g, 600.0, 0.5, cfg, 42, &rec);
  CHECK(rec.d_budget == doctest::Approx(100.0));  // 600 s / c = 6
  CHECK(d.t_local ==
        doctest::Approx(cfg.c_factor * distance(s.position(), d.target)));
  CHECK(d.t_local <= 600.0);
  CHECK(g.find(d.node_id) != nullptr);

  // With a 100 m budget all 9 equal-reward nodes fit; the optimum is any
  // shortest Hamiltonian path, so reward must equal the full sum.
  const GpModel gp = GpModel::fit({}, cfg.gp);
  const auto rewards = node_rewards(g, gp, cfg.beta);
  double total = 0.0;
  for (double r : rewards) total += r;
  CHECK(rec.route_reward == doctest::Approx(total).epsilon(1e-9));
  CHECK(rec.route_size == 9);
}

TEST_CASE("t_local for a 10 m hop at c=6 is 60 s") {
  const GridSpec spec = GridSpec::make(24.0, 4.0, 0.25);
  BeliefState b = prior(spec);
  // Single-row graph; force exactly one unvisited node 10 m away.
  SpatialGraph g(spec, 4.0, 2.0);
  for (auto& n : g.nodes()) n.visited = true;
  for (auto& n : g.nodes()) {
    if (n.region.contains({12.0, 2.0})) n.visited = false;
  }
  GlobalPlannerConfig cfg;
  RobotState s{4.0, 2.0, 0.0};  // 10 m from the (14,2) centroid
  GlobalPlanRecord rec;
  const GlobalDirective d = plan_global(s, b, g, 600.0, 0.5, cfg, 1, &rec);
  CHECK(distance(s.position(), d.target) == doctest::Approx(10.0));
  CHECK(d.t_local == doctest::Approx(60.0));
}

TEST_CASE("empty routes fall back to the nearest unvisited node") {
  const GridSpec spec = GridSpec::make(12.0, 12.0, 0.25);
  BeliefState b = prior(spec);
  SpatialGraph g(spec, 4.0, 2.0);
  GlobalPlannerConfig cfg;
  RobotState s{1.0, 1.0, 0.0};
  GlobalPlanRecord rec;
  // A 3 s budget maps to 0.5 m of distance: no node is routable.
  const GlobalDirective d = plan_global(s, b, g, 3.0, 0.5, cfg, 1, &rec);
  CHECK(rec.fallback);
  CHECK(d.node_id >= 0);
  CHECK(d.t_local > 0.0);
  CHECK(d.t_local <= 3.0);
  // Nearest unvisited centroid from (1,1) is the (2,2) block.
  CHECK(d.target.x == doctest::Approx(2.0));
  CHECK(d.target.y == doctest::Approx(2.0));
}
