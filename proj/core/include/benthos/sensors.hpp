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
#include <vector>

#include "benthos/grid.hpp"
#include "benthos/rng.hpp"
#include "benthos/world.hpp"

namespace benthos {

/// SE(2) robot state: planar position in meters, heading in (-pi, pi].
struct RobotState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
};

enum class SensorKind : std::uint8_t { kFls, kFlc, kDlc };
enum class TargetLayer : std::uint8_t { kSubstrate, kCoral };

/// Range-degrading detection model over a sector field of view:
/// P_TP(d) = 1 - tp_slope * d/r_max, P_FP(d) = fp_slope * d/r_max.
struct ScoutSensorSpec {
  double r_max = 6.0;       // meters
  double fov_deg = 90.0;    // full angular span
  double tp_slope = 0.1;
  double fp_slope = 0.1;
  TargetLayer layer = TargetLayer::kSubstrate;
  SensorKind kind = SensorKind::kFls;

  double p_tp(double d) const { return 1.0 - tp_slope * d / r_max; }
  double p_fp(double d) const { return fp_slope * d / r_max; }
  double half_angle_rad() const {
    return fov_deg * (3.14159265358979323846 / 180.0) * 0.5;
  }
  void validate() const;

  static ScoutSensorSpec fls_default();
  static ScoutSensorSpec flc_default();
};

/// Down-looking verification camera: square footprint of side `side_len`
/// centered on the robot and rotating with its heading.
struct DlcSpec {
  double side_len = 1.0;  // meters
  void validate() const;
};

struct Observation {
  int cell = -1;
  std::uint8_t z = 0;
  double distance = 0.0;  // meters, robot to cell center at sampling time
  SensorKind sensor = SensorKind::kFls;
};

/// Exact sector membership: distance no greater than r_max (closed ball),
/// relative bearing within the half angle (closed). A point exactly on the
/// robot is visible.
inline bool sector_contains(const RobotState& state,
                            const ScoutSensorSpec& spec, const Vec2& p) {
  const double dx = p.x - state.x;
  const double dy = p.y - state.y;
  const double d2 = dx * dx + dy * dy;
  if (d2 > spec.r_max * spec.r_max) return false;
  if (d2 == 0.0) return true;
  const double bearing = wrap_angle(std::atan2(dy, dx) - state.theta);
  return std::abs(bearing) <= spec.half_angle_rad();
}

/// Exact footprint membership: |d_lon| <= L/2 and |d_lat| <= L/2 in the
/// robot body frame.
inline bool footprint_contains(const RobotState& state, const DlcSpec& spec,
                               const Vec2& p) {
  const double c = std::cos(state.theta);
  const double s = std::sin(state.theta);
  const double dx = p.x - state.x;
  const double dy = p.y - state.y;
  const double lon = c * dx + s * dy;
  const double lat = -s * dx + c * dy;
  const double half = 0.5 * spec.side_len;
  return std::abs(lon) <= half && std::abs(lat) <= half;
}

/// Cells whose centers are within r_max (closed ball) and within the
/// angular span measured from the robot heading (closed boundary).
std::vector<int> visible_cells_sector(const RobotState& state,
                                      const ScoutSensorSpec& spec,
                                      const GridSpec& grid);

/// Cells whose centers fall inside the heading-aligned square footprint:
/// |d_lon| <= L/2 and |d_lat| <= L/2 in the body frame.
std::vector<int> footprint_cells(const RobotState& state, const DlcSpec& spec,
                                 const GridSpec& grid);

/// One stochastic observation per visible cell, Bernoulli with the
/// distance-dependent TP/FP rate picked by the cell's true state.
std::vector<Observation> sample_scout(const GroundTruth& gt,
                                      const RobotState& state,
                                      const ScoutSensorSpec& spec, Rng& rng);

/// Noise-free verification: z equals the coral state for every footprint
/// cell, deterministically.
std::vector<Observation> sample_dlc(const GroundTruth& gt,
                                    const RobotState& state,
                                    const DlcSpec& spec);

}  // namespace benthos
