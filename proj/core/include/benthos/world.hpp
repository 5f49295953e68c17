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
#include <iosfwd>
#include <string>
#include <vector>

#include "benthos/grid.hpp"

namespace benthos {

/// Hidden per-cell environment the planner has to discover: a binary
/// substrate layer (1 = hard substrate) and a binary target layer
/// (1 = coral present). Corals only occur on hard substrate.
struct GroundTruth {
  GridSpec spec;
  std::vector<std::uint8_t> substrate;
  std::vector<std::uint8_t> coral;
  std::uint64_t seed = 0;  // provenance; 0 for maps loaded without one

  int coral_count() const;
  int substrate_count() const;
  /// Throws ValidationError if any coral cell sits on soft substrate or
  /// the layer sizes disagree with the grid.
  void validate() const;
};

enum class Difficulty { kEasy, kMedium, kHard };

const char* to_string(Difficulty d);
Difficulty difficulty_from_string(const std::string& s);

/// Parameters of the synthetic clustered-map generator. Hard substrate is
/// the union of randomly placed Gaussian blobs thresholded to hit
/// `substrate_fill_target`; coral cells are sampled independently inside
/// the substrate with probability `coral_density`.
struct MapGenConfig {
  double width_m = 50.0;
  double height_m = 50.0;
  double cell_size = 0.25;
  std::uint64_t seed = 0;
  int n_blobs = 5;
  double blob_radius_mean = 4.5;  // meters
  double blob_radius_std = 1.0;   // meters
  double substrate_fill_target = 0.3;  // fraction of cells
  double coral_density = 0.05;         // probability per hard cell

  void validate() const;
};

/// Difficulty presets: easy = few large clusters and dense targets, hard =
/// many small fragments and sparse targets.
MapGenConfig map_gen_preset(Difficulty difficulty, std::uint64_t seed);

/// Deterministic generator: identical config (including seed) reproduces a
/// bit-identical map. Throws ValidationError when the requested fill target
/// cannot be met by the configured blobs after a bounded number of retries.
GroundTruth generate_map(const MapGenConfig& config);

/// Plain-text map file: a small header followed by two run-length-encoded
/// binary layers. Round-trips exactly.
void save_map(const GroundTruth& gt, const std::string& path);
void save_map(const GroundTruth& gt, std::ostream& os);
GroundTruth load_map(const std::string& path);
GroundTruth load_map(std::istream& is);

}  // namespace benthos
