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

#include <cstdint>
#include <string>
#include <vector>

#include "benthos/grid.hpp"
#include "benthos/sensors.hpp"

namespace benthos {

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// Binary entropy (nats) of a Bernoulli with log-odds `ell`. Evaluated in
/// the cancellation-free form softplus(-|ell|) + |ell|*sigma(-|ell|).
double binary_entropy_logodds(double ell);

/// Per-cell log-odds posteriors over the substrate and coral layers, plus
/// the monotone DLC history mask. Cells are independent; correlation is
/// introduced only downstream by the planners.
struct BeliefState {
  GridSpec spec;
  std::vector<double> ell_s;        // substrate log-odds
  std::vector<double> ell_c;        // coral log-odds
  std::vector<std::uint8_t> xi;     // 1 once verified by the DLC
  double ell_min = -10.0;
  double ell_max = 10.0;

  static BeliefState uniform_prior(const GridSpec& spec, double ell_min = -10.0,
                                   double ell_max = 10.0);

  double prob_s(int cell) const { return sigmoid(ell_s[static_cast<std::size_t>(cell)]); }
  double prob_c(int cell) const { return sigmoid(ell_c[static_cast<std::size_t>(cell)]); }
};

/// Candidate sampling targets: cells whose coral probability exceeds the
/// confidence threshold and that the DLC has not verified yet.
struct CandidateMap {
  std::vector<std::uint8_t> flags;
  std::vector<int> cells;  // indices with flags == 1, ascending
};

/// Additive log-odds update from one scouting observation, clamped to the
/// belief bounds. Throws if the observation lies beyond the sensor range or
/// comes from the wrong sensor kind.
void update_scout(BeliefState& belief, const Observation& obs,
                  const ScoutSensorSpec& spec);

/// Deterministic verification update: saturates the coral log-odds, sets
/// the history mask, and returns 1 when a coral cell is verified for the
/// first time (the mission's sampling reward), else 0.
int update_dlc(BeliefState& belief, const Observation& obs);

/// Per-cell binary entropy in nats for the requested layer.
std::vector<double> entropy_map(const BeliefState& belief, TargetLayer layer);

/// delta must be in (0.5, 1).
CandidateMap extract_candidates(const BeliefState& belief, double delta);

struct RegionStats {
  double rho_bar = 0.0;  // mean substrate probability
  double nu2_bar = 0.0;  // mean Bernoulli posterior variance b(1-b)
};

/// Aggregated substrate statistics over a non-empty cell set.
RegionStats region_stats(const BeliefState& belief,
                         const std::vector<int>& cells);

/// Writes `<prefix>.bin` (ell_s, ell_c as float64, xi as u8) and
/// `<prefix>.json` describing the layout, for post-hoc visualization.
void save_belief_snapshot(const BeliefState& belief, const std::string& prefix);

}  // namespace benthos
