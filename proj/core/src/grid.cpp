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

#include "benthos/grid.hpp"

#include <algorithm>
#include <string>

namespace benthos {

GridSpec GridSpec::make(double width_m, double height_m, double cell_size) {
  if (!(width_m > 0.0) || !(height_m > 0.0) || !(cell_size > 0.0)) {
    throw ValidationError("grid dimensions and cell size must be positive");
  }
  const double fc = width_m / cell_size;
  const double fr = height_m / cell_size;
  const double rc = std::round(fc);
  const double rr = std::round(fr);
  if (std::abs(fc - rc) > 1e-9 * std::max(1.0, fc) ||
      std::abs(fr - rr) > 1e-9 * std::max(1.0, fr)) {
    throw ValidationError("grid dimensions must be an integral number of cells");
  }
  GridSpec s;
  s.width_m = width_m;
  s.height_m = height_m;
  s.cell_size = cell_size;
  s.cols = static_cast<int>(rc);
  s.rows = static_cast<int>(rr);
  if (static_cast<long long>(s.rows) * s.cols > 16'000'000ll) {
    throw ValidationError("grid too large: " + std::to_string(s.rows) + "x" +
                          std::to_string(s.cols));
  }
  return s;
}

std::vector<int> cells_in_region(const GridSpec& spec, const Rect& region) {
  std::vector<int> out;
  if (region.x1 <= region.x0 || region.y1 <= region.y0) return out;
  const double d = spec.cell_size;
  // Conservative index window; exact membership is decided per center.
  int c0 = std::max(0, static_cast<int>(std::floor(region.x0 / d)) - 1);
  int c1 = std::min(spec.cols - 1, static_cast<int>(std::floor(region.x1 / d)) + 1);
  int r0 = std::max(0, static_cast<int>(std::floor(region.y0 / d)) - 1);
  int r1 = std::min(spec.rows - 1, static_cast<int>(std::floor(region.y1 / d)) + 1);
  for (int r = r0; r <= r1; ++r) {
    const double cy = (r + 0.5) * d;
    if (cy < region.y0 || cy >= region.y1) continue;
    for (int c = c0; c <= c1; ++c) {
      const double cx = (c + 0.5) * d;
      if (cx >= region.x0 && cx < region.x1) out.push_back(spec.index(r, c));
    }
  }
  return out;
}

}  // namespace benthos
