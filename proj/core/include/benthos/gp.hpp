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

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "benthos/grid.hpp"

namespace benthos {

/// One aggregated graph-node observation feeding the reward field:
/// position, mean substrate probability, and its per-node noise variance.
struct GpObservation {
  Vec2 position;
  double rho_bar = 0.5;
  double nu2_bar = 0.0;
};

struct GpConfig {
  double signal_variance = 0.25;
  double lengthscale = 5.0;   // meters
  double prior_mean = 0.5;
  double jitter = 1e-10;      // initial Cholesky jitter, escalated on failure
};

struct GpPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Heteroscedastic GP regression with a squared-exponential kernel and a
/// per-point diagonal noise matrix R = diag(nu2_i). Posterior:
///   mu(q)     = m0 + k_q^T (K+R)^-1 (rho - m0)
///   sigma2(q) = k(q,q) - k_q^T (K+R)^-1 k_q   (clamped at 0)
class GpModel {
 public:
  GpModel() = default;

  /// Deterministic fit; empty data is allowed (pure prior). Throws
  /// NumericalError if K+R stays indefinite after jitter escalation.
  static GpModel fit(const std::vector<GpObservation>& data,
                     const GpConfig& cfg);

  GpPrediction predict(const Vec2& query) const;
  std::vector<GpPrediction> predict(const std::vector<Vec2>& queries) const;

  const GpConfig& config() const { return cfg_; }
  int training_size() const { return static_cast<int>(x_.size()); }

 private:
  double kernel(const Vec2& a, const Vec2& b) const;

  GpConfig cfg_;
  std::vector<Vec2> x_;
  Eigen::VectorXd centered_targets_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;  // (K+R)^-1 (rho - m0)
};

}  // namespace benthos
