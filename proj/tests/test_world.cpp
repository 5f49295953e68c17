#include <cmath>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "benthos/world.hpp"
#include "test_util.hpp"

using namespace benthos;

namespace {

MapGenConfig small_config() {
  MapGenConfig c;
  c.width_m = 20.0;
  c.height_m = 20.0;
  c.cell_size = 0.25;
  c.seed = 7;
  c.n_blobs = 4;
  c.blob_radius_mean = 3.0;
  c.blob_radius_std = 0.5;
  c.substrate_fill_target = 0.3;
  c.coral_density = 0.05;
  return c;
}

std::string serialize(const GroundTruth& gt) {
  std::ostringstream os;
  save_map(gt, os);
  return os.str();
}

}  // namespace

TEST_CASE("identical seed produces a byte-identical map") {
  const MapGenConfig c = small_config();
  const GroundTruth a = generate_map(c);
  const GroundTruth b = generate_map(c);
  CHECK(a.substrate == b.substrate);
  CHECK(a.coral == b.coral);
  CHECK(serialize(a) == serialize(b));
}

TEST_CASE("zero coral density yields zero coral cells") {
  MapGenConfig c = small_config();
  c.coral_density = 0.0;
  CHECK(generate_map(c).coral_count() == 0);
}

TEST_CASE("coral count follows a binomial over the substrate mask") {
  MapGenConfig c = small_config();
  c.width_m = 50.0;
  c.height_m = 50.0;  // 200x200 grid
  c.n_blobs = 5;
  c.blob_radius_mean = 5.0;
  const GroundTruth gt = generate_map(c);
  const double n_hard = gt.substrate_count();
  REQUIRE(n_hard > 0);
  const double mean = 0.05 * n_hard;
  const double sigma = std::sqrt(n_hard * 0.05 * 0.95);
  CHECK(std::abs(gt.coral_count() - mean) <= 3.0 * sigma);
}

TEST_CASE("achieved substrate fill lands within ten points of the target") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    MapGenConfig c = small_config();
    c.seed = seed;
    const GroundTruth gt = generate_map(c);
    const double fill =
        static_cast<double>(gt.substrate_count()) / gt.spec.cell_count();
    CHECK(std::abs(fill - c.substrate_fill_target) <= 0.10);
  }
}

TEST_CASE("every generated coral cell sits on hard substrate") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    MapGenConfig c = small_config();
    c.seed = seed;
    const GroundTruth gt = generate_map(c);
    CHECK_NOTHROW(gt.validate());
    for (std::size_t i = 0; i < gt.coral.size(); ++i) {
      if (gt.coral[i]) REQUIRE(gt.substrate[i] == 1);
    }
  }
}

TEST_CASE("difficulty presets generate valid maps at their fill tiers") {
  CHECK(generate_map(map_gen_preset(Difficulty::kEasy, 11)).coral_count() > 0);
  CHECK(generate_map(map_gen_preset(Difficulty::kMedium, 21)).coral_count() > 0);
  CHECK(generate_map(map_gen_preset(Difficulty::kHard, 31)).coral_count() > 0);
}

TEST_CASE("map save/load round-trips exactly") {
  benthos::test::TempDir tmp("world");
  const GroundTruth a = generate_map(small_config());
  save_map(a, tmp.file("m.map"));
  const GroundTruth b = load_map(tmp.file("m.map"));
  CHECK(a.substrate == b.substrate);
  CHECK(a.coral == b.coral);
  CHECK(a.spec.rows == b.spec.rows);
  CHECK(a.seed == b.seed);
}

TEST_CASE("map file with coral on sand is rejected") {
  GroundTruth gt = generate_map(small_config());
  // Forge an invalid file by flipping a sand cell's coral bit.
  std::size_t sand = 0;
  while (gt.substrate[sand]) ++sand;
  gt.coral[sand] = 1;
  std::ostringstream os;
  // save_map validates, so serialize manually through a copy with the
  // invariant violated only in the payload.
  CHECK_THROWS_AS(save_map(gt, os), ValidationError);
  gt.coral[sand] = 0;
  std::ostringstream ok;
  save_map(gt, ok);
  std::string text = ok.str();
  // Rewrite the coral layer to claim every cell, including sand.
  const auto pos = text.find("layer coral");
  REQUIRE(pos != std::string::npos);
  std::string forged = text.substr(0, pos) + "layer coral\n" +
                       std::to_string(gt.spec.cell_count()) + "x1\nend\n";
  std::istringstream is(forged);
  CHECK_THROWS_AS(load_map(is), ValidationError);
}

TEST_CASE("empty or malformed map files raise parse errors") {
  {
    std::istringstream is("");
    CHECK_THROWS_AS(load_map(is), ParseError);
  }
  {
    std::istringstream is("benthic-map v1\nwidth_m 10\n");
    CHECK_THROWS_AS(load_map(is), ParseError);
  }
  {
    std::istringstream is(
        "benthic-map v1\nwidth_m 1\nheight_m 1\ncell_size 0.5\nseed 0\n"
        "layer substrate\n4xQ\nlayer coral\n4x0\nend\n");
    CHECK_THROWS_AS(load_map(is), ParseError);
  }
}

TEST_CASE("infeasible blob configs are rejected after bounded retries") {
  MapGenConfig c = small_config();
  c.n_blobs = 1;
  c.blob_radius_mean = 0.3;
  c.blob_radius_std = 0.0;
  c.substrate_fill_target = 0.9;
  CHECK_THROWS_AS(generate_map(c), ValidationError);
}

TEST_CASE("cells_in_region selects exactly the centers inside") {
  const GridSpec spec = GridSpec::make(10.0, 10.0, 0.25);
  CHECK(cells_in_region(spec, spec.bounds()).size() ==
        static_cast<std::size_t>(spec.cell_count()));
  CHECK(cells_in_region(spec, {1.0, 1.0, 3.0, 3.0}).size() == 64);
  CHECK(cells_in_region(spec, {2.0, 2.0, 2.0, 5.0}).empty());
  // Half-open max edges: a center on the max edge is excluded.
  const auto cells = cells_in_region(spec, {0.0, 0.0, 1.125, 0.5});
  for (int c : cells) {
    CHECK(spec.cell_center(c).x < 1.125);
  }
  CHECK(cells.size() == 8);  // 4 columns (0.125..0.875) x 2 rows
}

TEST_CASE("adjacent regions partition the cell set") {
  const GridSpec spec = GridSpec::make(10.0, 10.0, 0.25);
  const Rect left{0.0, 0.0, 5.0, 10.0};
  const Rect right{5.0, 0.0, 10.0, 10.0};
  const auto a = cells_in_region(spec, left);
  const auto b = cells_in_region(spec, right);
  CHECK(a.size() + b.size() == static_cast<std::size_t>(spec.cell_count()));
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(spec.cell_count()), 0);
  for (int c : a) seen[static_cast<std::size_t>(c)] ^= 1;
  for (int c : b) seen[static_cast<std::size_t>(c)] ^= 1;
  for (auto v : seen) CHECK(v == 1);
}
