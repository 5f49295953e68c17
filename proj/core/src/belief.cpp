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

#include "benthos/belief.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace benthos {

double binary_entropy_logodds(double ell) {
  const double a = std::abs(ell);
  const double t = std::exp(-a);
  // softplus(-a) + a * sigma(-a); both terms positive, no cancellation.
  return std::log1p(t) + a * t / (1.0 + t);
}

BeliefState BeliefState::uniform_prior(const GridSpec& spec, double ell_min,
                                       double ell_max) {
  if (!(ell_min < 0.0) || !(ell_max > 0.0)) {
    throw ValidationError("belief clamp bounds must straddle zero");
  }
  BeliefState b;
  b.spec = spec;
  const std::size_t n = static_cast<std::size_t>(spec.cell_count());
  b.ell_s.assign(n, 0.0);
  b.ell_c.assign(n, 0.0);
  b.xi.assign(n, 0);
  b.ell_min = ell_min;
  b.ell_max = ell_max;
  return b;
}

void update_scout(BeliefState& belief, const Observation& obs,
                  const ScoutSensorSpec& spec) {
  if (obs.sensor != spec.kind) {
    throw ValidationError("observation sensor does not match spec");
  }
  if (obs.distance > spec.r_max) {
    throw ValidationError("scout observation beyond sensor range");
  }
  if (!belief.spec.valid_index(obs.cell)) {
    throw ValidationError("observation cell out of range");
  }
  const double ptp = spec.p_tp(obs.distance);
  const double pfp = spec.p_fp(obs.distance);
  // log [ P_TP^z (1-P_TP)^(1-z) / (P_FP^z (1-P_FP)^(1-z)) ]; the z=1 branch
  // diverges to +inf at d=0 under a perfect sensor and is absorbed by the
  // clamp below.
  const double inc =
      obs.z ? std::log(ptp) - std::log(pfp)
            : std::log(1.0 - ptp) - std::log(1.0 - pfp);
  auto& layer = spec.layer == TargetLayer::kSubstrate ? belief.ell_s
                                                      : belief.ell_c;
  double& ell = layer[static_cast<std::size_t>(obs.cell)];
  ell = std::clamp(ell + inc, belief.ell_min, belief.ell_max);
}

int update_dlc(BeliefState& belief, const Observation& obs) {
  if (obs.sensor != SensorKind::kDlc) {
    throw ValidationError("update_dlc requires a DLC observation");
  }
  if (!belief.spec.valid_index(obs.cell)) {
    throw ValidationError("observation cell out of range");
  }
  const std::size_t i = static_cast<std::size_t>(obs.cell);
  belief.ell_c[i] = obs.z ? belief.ell_max : belief.ell_min;
  const int newly = (obs.z && !belief.xi[i]) ? 1 : 0;
  belief.xi[i] = 1;  // verified either way; never re-checked
  return newly;
}

std::vector<double> entropy_map(const BeliefState& belief, TargetLayer layer) {
  const auto& ell =
      layer == TargetLayer::kSubstrate ? belief.ell_s : belief.ell_c;
  std::vector<double> out(ell.size());
  for (std::size_t i = 0; i < ell.size(); ++i) {
    out[i] = binary_entropy_logodds(ell[i]);
  }
  return out;
}

CandidateMap extract_candidates(const BeliefState& belief, double delta) {
  if (!(delta > 0.5) || !(delta < 1.0)) {
    throw ValidationError("candidate threshold delta must be in (0.5, 1)");
  }
  CandidateMap m;
  m.flags.assign(belief.ell_c.size(), 0);
  for (std::size_t i = 0; i < belief.ell_c.size(); ++i) {
    if (!belief.xi[i] && sigmoid(belief.ell_c[i]) > delta) {
      m.flags[i] = 1;
      m.cells.push_back(static_cast<int>(i));
    }
  }
  return m;
}

RegionStats region_stats(const BeliefState& belief,
                         const std::vector<int>& cells) {
  if (cells.empty()) {
    throw ValidationError("region_stats requires a non-empty cell set");
  }
  double sum_b = 0.0;
  double sum_v = 0.0;
  for (int c : cells) {
    const double b = belief.prob_s(c);
    sum_b += b;
    sum_v += b * (1.0 - b);
  }
  const double inv = 1.0 / static_cast<double>(cells.size());
  return {sum_b * inv, sum_v * inv};
}

void save_belief_snapshot(const BeliefState& belief,
                          const std::string& prefix) {
  {
    std::ofstream bin(prefix + ".bin", std::ios::binary);
    if (!bin) throw ValidationError("cannot write " + prefix + ".bin");
    bin.write(reinterpret_cast<const char*>(belief.ell_s.data()),
              static_cast<std::streamsize>(belief.ell_s.size() * sizeof(double)));
    bin.write(reinterpret_cast<const char*>(belief.ell_c.data()),
              static_cast<std::streamsize>(belief.ell_c.size() * sizeof(double)));
    bin.write(reinterpret_cast<const char*>(belief.xi.data()),
              static_cast<std::streamsize>(belief.xi.size()));
    if (!bin) throw ValidationError("write failed: " + prefix + ".bin");
  }
  nlohmann::json header;
  header["rows"] = belief.spec.rows;
  header["cols"] = belief.spec.cols;
  header["cell_size"] = belief.spec.cell_size;
  header["clamp"] = {belief.ell_min, belief.ell_max};
  header["layout"] = {
      {"ell_s", {{"dtype", "float64"}, {"count", belief.ell_s.size()}}},
      {"ell_c", {{"dtype", "float64"}, {"count", belief.ell_c.size()}}},
      {"xi", {{"dtype", "uint8"}, {"count", belief.xi.size()}}}};
  header["order"] = "row-major";
  std::ofstream js(prefix + ".json");
  if (!js) throw ValidationError("cannot write " + prefix + ".json");
  js << header.dump(2) << '\n';
}

}  // namespace benthos
