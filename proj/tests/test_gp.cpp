#include <cmath>

#include <doctest.h>

#include "benthos/gp.hpp"
#include "benthos/rng.hpp"

using namespace benthos;

TEST_CASE("empty training data reproduces the prior") {
  const GpModel m = GpModel::fit({}, GpConfig{});
  for (const Vec2 q : {Vec2{0, 0}, Vec2{13, 7}, Vec2{-4, 2}}) {
    const auto p = m.predict(q);
    CHECK(p.mean == doctest::Approx(0.5));
    CHECK(p.variance == doctest::Approx(0.25));
  }
}

TEST_CASE("a noiseless point is interpolated exactly") {
  const GpModel m = GpModel::fit({{{2.0, 3.0}, 0.9, 0.0}}, GpConfig{});
  const auto p = m.predict({2.0, 3.0});
  CHECK(p.mean == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(p.variance == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("noise equal to the signal variance shrinks halfway") {
  GpConfig cfg;  // signal variance 0.25, prior mean 0.5
  const GpModel m = GpModel::fit({{{1.0, 1.0}, 0.9, cfg.signal_variance}}, cfg);
  const auto p = m.predict({1.0, 1.0});
  // k0/(k0 + nu^2) = 1/2 shrinkage toward the prior mean.
  CHECK(p.mean == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("far queries recover the prior variance") {
  GpConfig cfg;
  const GpModel m = GpModel::fit({{{0.0, 0.0}, 0.9, 0.01}}, cfg);
  const auto p = m.predict({10.0 * cfg.lengthscale, 0.0});
  CHECK(p.variance >= 0.99 * cfg.signal_variance);
  CHECK(p.variance <= cfg.signal_variance + 1e-9);
  CHECK(p.mean == doctest::Approx(cfg.prior_mean).epsilon(1e-6));
}

TEST_CASE("batch prediction equals pointwise prediction") {
  Rng rng(17);
  std::vector<GpObservation> data;
  for (int i = 0; i < 12; ++i) {
    data.push_back({{rng.uniform(0, 20), rng.uniform(0, 20)},
                    rng.uniform(0.1, 0.9),
                    rng.uniform(0.0, 0.2)});
  }
  const GpModel m = GpModel::fit(data, GpConfig{});
  std::vector<Vec2> queries;
  for (int i = 0; i < 8; ++i) {
    queries.push_back({rng.uniform(0, 20), rng.uniform(0, 20)});
  }
  const auto batch = m.predict(queries);
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto p = m.predict(queries[i]);
    CHECK(batch[i].mean == p.mean);
    CHECK(batch[i].variance == p.variance);
  }
}

TEST_CASE("posterior variance never exceeds the prior and shrinks with data") {
  Rng rng(23);
  GpConfig cfg;
  std::vector<GpObservation> data;
  for (int i = 0; i < 20; ++i) {
    data.push_back({{rng.uniform(0, 30), rng.uniform(0, 30)},
                    rng.uniform(0.0, 1.0),
                    rng.uniform(0.0, 0.25)});
  }
  const GpModel m = GpModel::fit(data, cfg);
  for (int i = 0; i < 50; ++i) {
    const Vec2 q{rng.uniform(-5, 35), rng.uniform(-5, 35)};
    CHECK(m.predict(q).variance <= cfg.signal_variance + 1e-8);
  }
  // Adding a noiseless observation at q never increases variance at q.
  for (int i = 0; i < 10; ++i) {
    const Vec2 q{rng.uniform(0, 30), rng.uniform(0, 30)};
    const double before = m.predict(q).variance;
    auto augmented = data;
    augmented.push_back({q, 0.5, 0.0});
    const double after = GpModel::fit(augmented, cfg).predict(q).variance;
    CHECK(after <= before + 1e-8);
  }
}

TEST_CASE("duplicate noiseless points survive via jitter escalation") {
  std::vector<GpObservation> data{{{3.0, 3.0}, 0.8, 0.0},
                                  {{3.0, 3.0}, 0.8, 0.0}};
  const GpModel m = GpModel::fit(data, GpConfig{});
  CHECK(m.predict({3.0, 3.0}).mean == doctest::Approx(0.8).epsilon(1e-4));
}
