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

#include "benthos/sensors.hpp"

#include <algorithm>
#include <cmath>

namespace benthos {

void ScoutSensorSpec::validate() const {
  if (!(r_max > 0.0)) throw ValidationError("sensor r_max must be positive");
  if (!(fov_deg > 0.0) || fov_deg > 360.0) {
    throw ValidationError("sensor fov_deg must be in (0, 360]");
  }
  if (!(tp_slope > 0.0) || !(tp_slope < 1.0)) {
    throw ValidationError("tp_slope must be in (0,1)");
  }
  if (!(fp_slope > 0.0) || !(fp_slope < 1.0)) {
    throw ValidationError("fp_slope must be in (0,1)");
  }
  // Discrimination must hold strictly inside the range.
  for (double dn : {0.0, 0.25, 0.5, 0.75, 0.999}) {
    const double d = dn * r_max;
    if (!(p_tp(d) > p_fp(d))) {
      throw ValidationError("sensor profile not discriminative inside range");
    }
  }
}

ScoutSensorSpec ScoutSensorSpec::fls_default() {
  ScoutSensorSpec s;
  s.r_max = 6.0;
  s.fov_deg = 90.0;
  s.tp_slope = 0.1;
  s.fp_slope = 0.1;
  s.layer = TargetLayer::kSubstrate;
  s.kind = SensorKind::kFls;
  return s;
}

ScoutSensorSpec ScoutSensorSpec::flc_default() {
  ScoutSensorSpec s;
  s.r_max = 2.5;
  s.fov_deg = 60.0;
  s.tp_slope = 0.15;
  s.fp_slope = 0.15;
  s.layer = TargetLayer::kCoral;
  s.kind = SensorKind::kFlc;
  return s;
}

void DlcSpec::validate() const {
  if (!(side_len > 0.0)) throw ValidationError("DLC side_len must be positive");
}

std::vector<int> visible_cells_sector(const RobotState& state,
                                      const ScoutSensorSpec& spec,
                                      const GridSpec& grid) {
  std::vector<int> out;
  const double r = spec.r_max;
  const double d = grid.cell_size;
  const int c0 = std::max(0, static_cast<int>(std::floor((state.x - r) / d)));
  const int c1 =
      std::min(grid.cols - 1, static_cast<int>(std::floor((state.x + r) / d)));
  const int r0 = std::max(0, static_cast<int>(std::floor((state.y - r) / d)));
  const int r1 =
      std::min(grid.rows - 1, static_cast<int>(std::floor((state.y + r) / d)));
  for (int row = r0; row <= r1; ++row) {
    const double cy = (row + 0.5) * d;
    for (int col = c0; col <= c1; ++col) {
      const double cx = (col + 0.5) * d;
      if (sector_contains(state, spec, {cx, cy})) {
        out.push_back(grid.index(row, col));
      }
    }
  }
  return out;
}

std::vector<int> footprint_cells(const RobotState& state, const DlcSpec& spec,
                                 const GridSpec& grid) {
  std::vector<int> out;
  const double hl = 0.5 * spec.side_len;
  // Rotated square fits in a disk of radius hl*sqrt(2).
  const double reach = hl * 1.4142135623730951 + 1e-12;
  const double d = grid.cell_size;
  const int c0 =
      std::max(0, static_cast<int>(std::floor((state.x - reach) / d)));
  const int c1 = std::min(grid.cols - 1,
                          static_cast<int>(std::floor((state.x + reach) / d)));
  const int r0 =
      std::max(0, static_cast<int>(std::floor((state.y - reach) / d)));
  const int r1 = std::min(grid.rows - 1,
                          static_cast<int>(std::floor((state.y + reach) / d)));
  for (int row = r0; row <= r1; ++row) {
    const double cy = (row + 0.5) * d;
    for (int col = c0; col <= c1; ++col) {
      const double cx = (col + 0.5) * d;
      if (footprint_contains(state, spec, {cx, cy})) {
        out.push_back(grid.index(row, col));
      }
    }
  }
  return out;
}

std::vector<Observation> sample_scout(const GroundTruth& gt,
                                      const RobotState& state,
                                      const ScoutSensorSpec& spec, Rng& rng) {
  const auto& layer =
      spec.layer == TargetLayer::kSubstrate ? gt.substrate : gt.coral;
  std::vector<Observation> out;
  const auto visible = visible_cells_sector(state, spec, gt.spec);
  out.reserve(visible.size());
  for (int cell : visible) {
    const Vec2 p = gt.spec.cell_center(cell);
    const double d = std::hypot(p.x - state.x, p.y - state.y);
    const double p1 = layer[static_cast<std::size_t>(cell)] ? spec.p_tp(d)
                                                            : spec.p_fp(d);
    Observation o;
    o.cell = cell;
    o.z = rng.bernoulli(p1) ? 1 : 0;
    o.distance = d;
    o.sensor = spec.kind;
    out.push_back(o);
  }
  return out;
}

std::vector<Observation> sample_dlc(const GroundTruth& gt,
                                    const RobotState& state,
                                    const DlcSpec& spec) {
  std::vector<Observation> out;
  const auto cells = footprint_cells(state, spec, gt.spec);
  out.reserve(cells.size());
  for (int cell : cells) {
    const Vec2 p = gt.spec.cell_center(cell);
    Observation o;
    o.cell = cell;
    o.z = gt.coral[static_cast<std::size_t>(cell)];
    o.distance = std::hypot(p.x - state.x, p.y - state.y);
    o.sensor = SensorKind::kDlc;
    out.push_back(o);
  }
  return out;
}

}  // namespace benthos
