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

#include "benthos/gp.hpp"

#include <cmath>

#include "benthos/errors.hpp"

namespace benthos {

double GpModel::kernel(const Vec2& a, const Vec2& b) const {
  const double d2 = (a - b).squared_norm();
  const double l2 = cfg_.lengthscale * cfg_.lengthscale;
  return cfg_.signal_variance * std::exp(-0.5 * d2 / l2);
}

GpModel GpModel::fit(const std::vector<GpObservation>& data,
                     const GpConfig& cfg) {
  if (!(cfg.signal_variance > 0.0) || !(cfg.lengthscale > 0.0)) {
    throw ValidationError("GP hyperparameters must be positive");
  }
  GpModel m;
  m.cfg_ = cfg;
  const int n = static_cast<int>(data.size());
  if (n == 0) return m;

  m.x_.reserve(data.size());
  m.centered_targets_.resize(n);
  for (int i = 0; i < n; ++i) {
    if (data[static_cast<std::size_t>(i)].nu2_bar < 0.0) {
      throw ValidationError("GP observation noise must be non-negative");
    }
    m.x_.push_back(data[static_cast<std::size_t>(i)].position);
    m.centered_targets_(i) =
        data[static_cast<std::size_t>(i)].rho_bar - cfg.prior_mean;
  }

  Eigen::MatrixXd kr(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double k = m.kernel(m.x_[static_cast<std::size_t>(i)],
                                m.x_[static_cast<std::size_t>(j)]);
      kr(i, j) = k;
      kr(j, i) = k;
    }
    kr(i, i) += data[static_cast<std::size_t>(i)].nu2_bar;
  }

  double jitter = cfg.jitter;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Eigen::MatrixXd kj = kr;
    kj.diagonal().array() += jitter;
    m.llt_.compute(kj);
    if (m.llt_.info() == Eigen::Success) {
      m.alpha_ = m.llt_.solve(m.centered_targets_);
      return m;
    }
    jitter *= 100.0;
  }
  throw NumericalError("K+R not positive definite after jitter escalation");
}

GpPrediction GpModel::predict(const Vec2& query) const {
  if (x_.empty()) {
    return {cfg_.prior_mean, cfg_.signal_variance};
  }
  const int n = static_cast<int>(x_.size());
  Eigen::VectorXd kq(n);
  for (int i = 0; i < n; ++i) {
    kq(i) = kernel(query, x_[static_cast<std::size_t>(i)]);
  }
  const double mu = cfg_.prior_mean + kq.dot(alpha_);
  const Eigen::VectorXd v = llt_.solve(kq);
  double var = cfg_.signal_variance - kq.dot(v);
  if (var < 0.0) var = 0.0;
  return {mu, var};
}

std::vector<GpPrediction> GpModel::predict(
    const std::vector<Vec2>& queries) const {
  std::vector<GpPrediction> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(predict(q));
  return out;
}

}  // namespace benthos
