#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <doctest.h>

#include "benthos/belief.hpp"
#include "benthos/rng.hpp"
#include "test_util.hpp"

using namespace benthos;

namespace {

constexpr double kLn19 = 2.9444389791664403;
constexpr double kLn2 = 0.6931471805599453;

BeliefState fresh(double w = 10.0, double cell = 0.25) {
  return BeliefState::uniform_prior(GridSpec::make(w, w, cell));
}

Observation obs(int cell, int z, double d, SensorKind kind) {
  Observation o;
  o.cell = cell;
  o.z = static_cast<std::uint8_t>(z);
  o.distance = d;
  o.sensor = kind;
  return o;
}

}  // namespace

TEST_CASE("scout update adds the likelihood log-ratio") {
  BeliefState b = fresh();
  const ScoutSensorSpec fls = ScoutSensorSpec::fls_default();
  // d = 3 m: P_TP = 0.95, P_FP = 0.05.
  update_scout(b, obs(0, 1, 3.0, SensorKind::kFls), fls);
  CHECK(b.ell_s[0] == doctest::Approx(kLn19).epsilon(1e-12));
  update_scout(b, obs(1, 0, 3.0, SensorKind::kFls), fls);
  CHECK(b.ell_s[1] == doctest::Approx(-kLn19).epsilon(1e-12));
}

TEST_CASE("updates clamp at the saturation bounds") {
  BeliefState b = fresh();
  b.ell_s[0] = 9.5;
  const ScoutSensorSpec fls = ScoutSensorSpec::fls_default();
  update_scout(b, obs(0, 1, 3.0, SensorKind::kFls), fls);
  CHECK(b.ell_s[0] == 10.0);
  // Perfect evidence at d = 0 is absorbed by the clamp, not a NaN.
  BeliefState c = fresh();
  update_scout(c, obs(0, 1, 0.0, SensorKind::kFls), fls);
  CHECK(c.ell_s[0] == 10.0);
  update_scout(c, obs(1, 0, 0.0, SensorKind::kFls), fls);
  CHECK(c.ell_s[1] == -10.0);
}

TEST_CASE("out-of-range or mismatched observations are rejected") {
  BeliefState b = fresh();
  const ScoutSensorSpec fls = ScoutSensorSpec::fls_default();
  CHECK_THROWS_AS(update_scout(b, obs(0, 1, 6.5, SensorKind::kFls), fls),
                  ValidationError);
  CHECK_THROWS_AS(update_scout(b, obs(0, 1, 1.0, SensorKind::kFlc), fls),
                  ValidationError);
}

TEST_CASE("FLC updates land on the coral layer") {
  BeliefState b = fresh();
  const ScoutSensorSpec flc = ScoutSensorSpec::flc_default();
  update_scout(b, obs(5, 1, 1.0, SensorKind::kFlc), flc);
  CHECK(b.ell_c[5] > 0.0);
  CHECK(b.ell_s[5] == 0.0);
}

TEST_CASE("DLC updates saturate, mask, and count first visits only") {
  BeliefState b = fresh();
  Observation coral = obs(3, 1, 0.1, SensorKind::kDlc);
  CHECK(update_dlc(b, coral) == 1);
  CHECK(b.ell_c[3] == b.ell_max);
  CHECK(b.xi[3] == 1);
  CHECK(update_dlc(b, coral) == 0);  // re-observation yields nothing

  Observation empty = obs(4, 0, 0.1, SensorKind::kDlc);
  CHECK(update_dlc(b, empty) == 0);
  CHECK(b.ell_c[4] == b.ell_min);
  CHECK(b.xi[4] == 1);  // verified either way
}

TEST_CASE("binary entropy values and limits") {
  CHECK(binary_entropy_logodds(0.0) == doctest::Approx(kLn2).epsilon(1e-15));
  // Direct-formula oracle at ell = 10.
  const double bprob = 1.0 / (1.0 + std::exp(-10.0));
  const double direct = -bprob * std::log(bprob) -
                        (1.0 - bprob) * std::log(1.0 - bprob);
  CHECK(direct == doctest::Approx(0.0004993775862412086).epsilon(1e-10));
  CHECK(binary_entropy_logodds(10.0) ==
        doctest::Approx(direct).epsilon(1e-12));
  CHECK(binary_entropy_logodds(1e6) == 0.0);
  CHECK(binary_entropy_logodds(-1e6) == 0.0);

  BeliefState b = fresh();
  b.ell_s[0] = 10.0;
  const auto h = entropy_map(b, TargetLayer::kSubstrate);
  CHECK(h[0] == doctest::Approx(direct).epsilon(1e-12));
  CHECK(h[1] == doctest::Approx(kLn2).epsilon(1e-15));
}

TEST_CASE("candidate extraction respects threshold and mask") {
  BeliefState b = fresh();
  b.ell_c[0] = 2.0;  // sigma = 0.881 > 0.8
  b.ell_c[1] = 0.0;  // 0.5 < 0.8
  b.ell_c[2] = 3.0;
  b.xi[2] = 1;       // already verified
  const CandidateMap m = extract_candidates(b, 0.8);
  CHECK(m.flags[0] == 1);
  CHECK(m.flags[1] == 0);
  CHECK(m.flags[2] == 0);
  CHECK(m.cells == std::vector<int>{0});
  CHECK_THROWS_AS(extract_candidates(b, 0.5), ValidationError);
}

TEST_CASE("region statistics aggregate mean and Bernoulli variance") {
  BeliefState b = fresh();
  const std::vector<int> cells{0, 1, 2, 3};
  auto st = region_stats(b, cells);
  CHECK(st.rho_bar == doctest::Approx(0.5));
  CHECK(st.nu2_bar == doctest::Approx(0.25));

  for (int c : cells) b.ell_s[static_cast<std::size_t>(c)] = 10.0;
  st = region_stats(b, cells);
  CHECK(st.rho_bar == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(st.nu2_bar == doctest::Approx(0.0).epsilon(1e-4));

  b.ell_s[0] = 0.0;
  b.ell_s[1] = 0.0;
  st = region_stats(b, cells);
  CHECK(st.rho_bar == doctest::Approx(0.7499773010656487).epsilon(1e-12));
  CHECK(st.nu2_bar == doctest::Approx(0.12502269790386794).epsilon(1e-12));

  CHECK_THROWS_AS(region_stats(b, {}), ValidationError);
}

TEST_CASE("neutral evidence leaves the belief untouched") {
  // Profiles meeting at d = r_max: P_TP(r) = P_FP(r) = 0.5.
  ScoutSensorSpec s;
  s.r_max = 4.0;
  s.fov_deg = 90.0;
  s.tp_slope = 0.5;
  s.fp_slope = 0.5;
  s.layer = TargetLayer::kSubstrate;
  s.kind = SensorKind::kFls;
  BeliefState b = fresh();
  update_scout(b, obs(0, 1, 4.0, SensorKind::kFls), s);
  CHECK(b.ell_s[0] == 0.0);
  update_scout(b, obs(0, 0, 4.0, SensorKind::kFls), s);
  CHECK(b.ell_s[0] == 0.0);
}

TEST_CASE("batch updates are order invariant when unclamped") {
  Rng rng(5);
  const ScoutSensorSpec fls = ScoutSensorSpec::fls_default();
  std::vector<Observation> batch;
  for (int i = 0; i < 40; ++i) {
    batch.push_back(obs(0, static_cast<int>(rng.uniform_int(2)),
                        rng.uniform(0.2, 5.8), SensorKind::kFls));
  }
  auto run = [&](const std::vector<Observation>& seq) {
    BeliefState b =
        BeliefState::uniform_prior(GridSpec::make(10, 10, 0.25), -1e9, 1e9);
    for (const auto& o : seq) update_scout(b, o, fls);
    return b.ell_s[0];
  };
  const double base = run(batch);
  for (int p = 0; p < 5; ++p) {
    std::vector<Observation> perm = batch;
    for (std::size_t i = perm.size(); i > 1; --i) {
      std::swap(perm[i - 1], perm[rng.uniform_int(i)]);
    }
    CHECK(run(perm) == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("repeated observations converge to the true state") {
  // Smaller sibling of the acceptance criterion: 200 trials, d_norm 0.5.
  const ScoutSensorSpec fls = ScoutSensorSpec::fls_default();
  Rng rng(31);
  int correct = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const bool truth = t % 2 == 0;
    BeliefState b = fresh();
    for (int k = 0; k < 20; ++k) {
      const double p = truth ? fls.p_tp(3.0) : fls.p_fp(3.0);
      update_scout(b, obs(0, rng.bernoulli(p) ? 1 : 0, 3.0, SensorKind::kFls),
                   fls);
    }
    const bool believes = sigmoid(b.ell_s[0]) > 0.5;
    if (believes == truth) ++correct;
  }
  CHECK(correct >= 194);
}

TEST_CASE("belief snapshot export writes binary grids plus a JSON header") {
  benthos::test::TempDir tmp("belief");
  BeliefState b = fresh(2.0, 0.5);
  b.ell_s[1] = 3.0;
  save_belief_snapshot(b, tmp.file("snap"));
  std::ifstream bin(tmp.file("snap") + ".bin", std::ios::binary);
  REQUIRE(bin.good());
  std::vector<double> ell_s(b.ell_s.size());
  bin.read(reinterpret_cast<char*>(ell_s.data()),
           static_cast<std::streamsize>(ell_s.size() * sizeof(double)));
  CHECK(ell_s == b.ell_s);
  std::ifstream js(tmp.file("snap") + ".json");
  REQUIRE(js.good());
  std::string text((std::istreambuf_iterator<char>(js)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("\"rows\"") != std::string::npos);
}
