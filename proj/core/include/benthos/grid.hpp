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

#include <cmath>
#include <cstdint>
#include <vector>

#include "benthos/errors.hpp"

namespace benthos {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double squared_norm() const { return x * x + y * y; }
  double norm() const { return std::sqrt(squared_norm()); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  a = std::fmod(a + kTwoPi * 0.5, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - kTwoPi * 0.5;
}

/// Axis-aligned rectangle in meters, half-open on the max edges:
/// [x0, x1) x [y0, y1). The half-open convention makes adjacent regions
/// partition cell centers with no double counting.
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  Vec2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  bool contains(const Vec2& p) const {
    return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1;
  }
};

/// Regular grid over a rectangular workspace. Cells are indexed row-major
/// (index = row * cols + col); cell (r, c) has its center at
/// ((c + 0.5) * cell_size, (r + 0.5) * cell_size).
struct GridSpec {
  double width_m = 0.0;
  double height_m = 0.0;
  double cell_size = 0.0;
  int rows = 0;
  int cols = 0;

  /// Validates that the dimensions are an integral number of cells.
  static GridSpec make(double width_m, double height_m, double cell_size);

  int cell_count() const { return rows * cols; }
  int row_of(int idx) const { return idx / cols; }
  int col_of(int idx) const { return idx % cols; }
  int index(int row, int col) const { return row * cols + col; }
  bool valid_index(int idx) const { return idx >= 0 && idx < cell_count(); }

  Vec2 cell_center(int idx) const {
    return {(col_of(idx) + 0.5) * cell_size, (row_of(idx) + 0.5) * cell_size};
  }

  bool in_bounds(const Vec2& p) const {
    return p.x >= 0.0 && p.x < width_m && p.y >= 0.0 && p.y < height_m;
  }

  Rect bounds() const { return {0.0, 0.0, width_m, height_m}; }
};

/// Indices of all cells whose centers lie inside `region` (half-open on
/// the max edges). Empty intersection yields an empty set.
std::vector<int> cells_in_region(const GridSpec& spec, const Rect& region);

}  // namespace benthos
