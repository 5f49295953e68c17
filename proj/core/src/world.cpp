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

#include "benthos/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "benthos/rng.hpp"

namespace benthos {

int GroundTruth::coral_count() const {
  return static_cast<int>(std::count(coral.begin(), coral.end(), 1));
}

int GroundTruth::substrate_count() const {
  return static_cast<int>(std::count(substrate.begin(), substrate.end(), 1));
}

void GroundTruth::validate() const {
  const std::size_t n = static_cast<std::size_t>(spec.cell_count());
  if (substrate.size() != n || coral.size() != n) {
    throw ValidationError("ground truth layer size does not match grid");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (coral[i] && !substrate[i]) {
      throw ValidationError("coral on soft substrate at cell " +
                            std::to_string(i));
    }
  }
}

const char* to_string(Difficulty d) {
  switch (d) {
    case Difficulty::kEasy: return "easy";
    case Difficulty::kMedium: return "medium";
    case Difficulty::kHard: return "hard";
  }
  return "?";
}

Difficulty difficulty_from_string(const std::string& s) {
  if (s == "easy") return Difficulty::kEasy;
  if (s == "medium") return Difficulty::kMedium;
  if (s == "hard") return Difficulty::kHard;
  throw ValidationError("unknown difficulty: " + s);
}

void MapGenConfig::validate() const {
  GridSpec::make(width_m, height_m, cell_size);  // throws on bad dims
  if (n_blobs < 1) throw ValidationError("n_blobs must be >= 1");
  if (!(blob_radius_mean > 0.0)) {
    throw ValidationError("blob_radius_mean must be positive");
  }
  if (blob_radius_std < 0.0) {
    throw ValidationError("blob_radius_std must be non-negative");
  }
  if (!(substrate_fill_target > 0.0) || !(substrate_fill_target < 1.0)) {
    throw ValidationError("substrate_fill_target must be in (0,1)");
  }
  if (coral_density < 0.0 || coral_density > 1.0) {
    throw ValidationError("coral_density must be in [0,1]");
  }
}

MapGenConfig map_gen_preset(Difficulty difficulty, std::uint64_t seed) {
  MapGenConfig c;
  c.seed = seed;
  Rng rng = Rng::substream(seed, "mapgen-preset");
  switch (difficulty) {
    case Difficulty::kEasy:
      c.substrate_fill_target = 0.4;
      c.n_blobs = 2 + static_cast<int>(rng.uniform_int(2));  // 2-3
      c.blob_radius_mean = 7.0;
      c.blob_radius_std = 1.5;
      c.coral_density = 0.08;
      break;
    case Difficulty::kMedium:
      c.substrate_fill_target = 0.3;
      c.n_blobs = 4 + static_cast<int>(rng.uniform_int(3));  // 4-6
      c.blob_radius_mean = 4.5;
      c.blob_radius_std = 1.0;
      c.coral_density = 0.05;
      break;
    case Difficulty::kHard:
      c.substrate_fill_target = 0.2;
      c.n_blobs = 8 + static_cast<int>(rng.uniform_int(5));  // 8-12
      c.blob_radius_mean = 2.6;
      c.blob_radius_std = 0.6;
      c.coral_density = 0.03;
      break;
  }
  return c;
}

namespace {

// Blob fringes below this field value are noise, not cluster; if the fill
// threshold would have to dip under it the blob layout cannot honestly
// reach the target and we retry with a fresh draw.
constexpr double kFieldFloor = 0.05;
constexpr int kMaxAttempts = 8;

struct Blob {
  Vec2 center;
  double radius;
};

}  // namespace

GroundTruth generate_map(const MapGenConfig& config) {
  config.validate();
  const GridSpec spec =
      GridSpec::make(config.width_m, config.height_m, config.cell_size);
  const int n = spec.cell_count();

  Rng rng = Rng::substream(config.seed, "mapgen");
  GroundTruth gt;
  gt.spec = spec;
  gt.seed = config.seed;

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<Blob> blobs(static_cast<std::size_t>(config.n_blobs));
    for (auto& b : blobs) {
      b.center = {rng.uniform(0.0, config.width_m),
                  rng.uniform(0.0, config.height_m)};
      b.radius = std::max(config.cell_size,
                          rng.normal(config.blob_radius_mean,
                                     config.blob_radius_std));
    }

    // Field = max over blobs of a Gaussian bump; thresholding a max of
    // radial bumps yields a union of disks, i.e. distinct clusters.
    std::vector<double> field(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const Vec2 p = spec.cell_center(i);
      double f = 0.0;
      for (const auto& b : blobs) {
        const double d2 = (p - b.center).squared_norm();
        f = std::max(f, std::exp(-0.5 * d2 / (b.radius * b.radius)));
      }
      field[i] = f;
    }

    const int want = std::clamp(
        static_cast<int>(std::lround(config.substrate_fill_target * n)), 1,
        n - 1);
    std::vector<double> sorted(field);
    std::nth_element(sorted.begin(), sorted.begin() + (want - 1), sorted.end(),
                     std::greater<double>());
    const double threshold = sorted[static_cast<std::size_t>(want - 1)];
    if (threshold < kFieldFloor) continue;  // blobs too small for the target

    gt.substrate.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      gt.substrate[static_cast<std::size_t>(i)] = field[i] >= threshold ? 1 : 0;
    }

    gt.coral.assign(static_cast<std::size_t>(n), 0);
    if (config.coral_density > 0.0) {
      for (int i = 0; i < n; ++i) {
        if (gt.substrate[static_cast<std::size_t>(i)] &&
            rng.bernoulli(config.coral_density)) {
          gt.coral[static_cast<std::size_t>(i)] = 1;
        }
      }
    }
    gt.validate();
    return gt;
  }
  throw ValidationError(
      "map generation could not reach the substrate fill target; blobs too "
      "small or too few for substrate_fill_target");
}

// ---------------------------------------------------------------------------
// Map file I/O. Format:
//
//   benthic-map v1
//   width_m <w>
//   height_m <h>
//   cell_size <c>
//   seed <s>
//   layer substrate
//   <count>x<value> tokens, row-major
//   layer coral
//   ...
//   end

namespace {

void write_rle(std::ostream& os, const std::vector<std::uint8_t>& layer) {
  std::size_t i = 0;
  int tokens_on_line = 0;
  while (i < layer.size()) {
    std::size_t j = i;
    while (j < layer.size() && layer[j] == layer[i]) ++j;
    os << (j - i) << 'x' << static_cast<int>(layer[i]);
    if (++tokens_on_line == 16) {
      os << '\n';
      tokens_on_line = 0;
    } else {
      os << ' ';
    }
    i = j;
  }
  if (tokens_on_line != 0) os << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  bool next(std::string& line) {
    while (std::getline(is_, line)) {
      ++line_no_;
      if (!line.empty()) return true;
    }
    return false;
  }

  int line_no() const { return line_no_; }

 private:
  std::istream& is_;
  int line_no_ = 0;
};

double parse_header_value(const std::string& line, const std::string& key,
                          int line_no) {
  std::istringstream ss(line);
  std::string k;
  double v = 0.0;
  if (!(ss >> k >> v) || k != key) {
    throw ParseError("expected '" + key + " <value>'", line_no);
  }
  return v;
}

}  // namespace

void save_map(const GroundTruth& gt, std::ostream& os) {
  gt.validate();
  os << "benthic-map v1\n";
  os << "width_m " << gt.spec.width_m << '\n';
  os << "height_m " << gt.spec.height_m << '\n';
  os << "cell_size " << gt.spec.cell_size << '\n';
  os << "seed " << gt.seed << '\n';
  os << "layer substrate\n";
  write_rle(os, gt.substrate);
  os << "layer coral\n";
  write_rle(os, gt.coral);
  os << "end\n";
}

void save_map(const GroundTruth& gt, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot open for writing: " + path);
  save_map(gt, f);
  if (!f) throw ValidationError("write failed: " + path);
}

GroundTruth load_map(std::istream& is) {
  LineReader reader(is);
  std::string line;
  if (!reader.next(line)) throw ParseError("empty map file", 0);
  if (line != "benthic-map v1") {
    throw ParseError("bad magic, expected 'benthic-map v1'", reader.line_no());
  }

  auto read_header = [&](const std::string& key) {
    if (!reader.next(line)) {
      throw ParseError("unexpected end of file in header", 0);
    }
    return parse_header_value(line, key, reader.line_no());
  };
  const double w = read_header("width_m");
  const double h = read_header("height_m");
  const double cell = read_header("cell_size");
  const double seed = read_header("seed");

  GroundTruth gt;
  gt.spec = GridSpec::make(w, h, cell);
  gt.seed = static_cast<std::uint64_t>(seed);
  const std::size_t n = static_cast<std::size_t>(gt.spec.cell_count());

  auto read_layer = [&](const std::string& name,
                        std::vector<std::uint8_t>& layer) {
    if (!reader.next(line) || line != "layer " + name) {
      throw ParseError("expected 'layer " + name + "'", reader.line_no());
    }
    layer.clear();
    layer.reserve(n);
    while (layer.size() < n) {
      if (!reader.next(line)) {
        throw ParseError("unexpected end of file in layer '" + name + "'", 0);
      }
      std::istringstream ss(line);
      std::string tok;
      while (ss >> tok) {
        const auto xpos = tok.find('x');
        if (xpos == std::string::npos) {
          throw ParseError("bad RLE token '" + tok + "'", reader.line_no());
        }
        std::size_t count = 0;
        int value = -1;
        try {
          count = std::stoull(tok.substr(0, xpos));
          value = std::stoi(tok.substr(xpos + 1));
        } catch (const std::exception&) {
          throw ParseError("bad RLE token '" + tok + "'", reader.line_no());
        }
        if (value != 0 && value != 1) {
          throw ParseError("RLE value must be 0 or 1", reader.line_no());
        }
        if (count == 0 || layer.size() + count > n) {
          throw ParseError("RLE run overflows layer '" + name + "'",
                           reader.line_no());
        }
        layer.insert(layer.end(), count, static_cast<std::uint8_t>(value));
      }
    }
  };
  read_layer("substrate", gt.substrate);
  read_layer("coral", gt.coral);
  if (!reader.next(line) || line != "end") {
    throw ParseError("expected 'end'", reader.line_no());
  }
  gt.validate();  // enforces coral-on-substrate
  return gt;
}

GroundTruth load_map(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open map file: " + path);
  return load_map(f);
}

}  // namespace benthos
