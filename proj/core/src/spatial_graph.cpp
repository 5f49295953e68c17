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

#include "benthos/spatial_graph.hpp"

#include <algorithm>
#include <cmath>

namespace benthos {

SpatialGraph::SpatialGraph(const GridSpec& spec, double macro_size,
                           double micro_size)
    : spec_(spec), macro_size_(macro_size), micro_size_(micro_size) {
  if (!(micro_size > 0.0) || !(macro_size >= micro_size)) {
    throw ValidationError("require macro_size >= micro_size > 0");
  }
  const int nx = static_cast<int>(std::ceil(spec.width_m / macro_size - 1e-9));
  const int ny = static_cast<int>(std::ceil(spec.height_m / macro_size - 1e-9));
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      Rect r;
      r.x0 = ix * macro_size;
      r.y0 = iy * macro_size;
      r.x1 = std::min(spec.width_m, r.x0 + macro_size);
      r.y1 = std::min(spec.height_m, r.y0 + macro_size);
      nodes_.push_back(make_node(r, NodeLevel::kMacro));
    }
  }
}

GraphNode SpatialGraph::make_node(const Rect& region, NodeLevel level) {
  GraphNode n;
  n.id = next_id_++;
  n.region = region;
  n.center = region.center();
  n.level = level;
  n.area_weight = region.area() / (micro_size_ * micro_size_);
  return n;
}

int SpatialGraph::macro_count() const {
  return static_cast<int>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const GraphNode& n) {
        return n.level == NodeLevel::kMacro;
      }));
}

int SpatialGraph::micro_count() const {
  return static_cast<int>(nodes_.size()) - macro_count();
}

std::vector<int> SpatialGraph::region_cells(const GraphNode& node) const {
  return cells_in_region(spec_, node.region);
}

int SpatialGraph::maybe_split(const BeliefState& belief, double h_split) {
  constexpr double kLn2 = 0.6931471805599453;
  if (!(h_split > 0.0) || !(h_split < kLn2)) {
    throw ValidationError("h_split must be in (0, ln 2)");
  }
  std::vector<GraphNode> result;
  std::vector<GraphNode> children;
  int splits = 0;
  for (const auto& node : nodes_) {
    if (node.level != NodeLevel::kMacro) {
      result.push_back(node);
      continue;
    }
    const auto cells = region_cells(node);
    double mean_h = kLn2;
    if (!cells.empty()) {
      double sum = 0.0;
      for (int c : cells) {
        sum += binary_entropy_logodds(belief.ell_s[static_cast<std::size_t>(c)]);
      }
      mean_h = sum / static_cast<double>(cells.size());
    }
    if (mean_h >= h_split) {
      result.push_back(node);
      continue;
    }
    ++splits;
    // Tile the parent rectangle with micro regions; edge children clipped.
    const int mx = static_cast<int>(std::ceil(node.region.width() / micro_size_ - 1e-9));
    const int my = static_cast<int>(std::ceil(node.region.height() / micro_size_ - 1e-9));
    for (int iy = 0; iy < my; ++iy) {
      for (int ix = 0; ix < mx; ++ix) {
        Rect r;
        r.x0 = node.region.x0 + ix * micro_size_;
        r.y0 = node.region.y0 + iy * micro_size_;
        r.x1 = std::min(node.region.x1, r.x0 + micro_size_);
        r.y1 = std::min(node.region.y1, r.y0 + micro_size_);
        children.push_back(make_node(r, NodeLevel::kMicro));
      }
    }
  }
  if (splits > 0) {
    result.insert(result.end(), children.begin(), children.end());
    nodes_ = std::move(result);
  }
  return splits;
}

void SpatialGraph::mark_visited_at(const Vec2& p) {
  for (auto& n : nodes_) {
    if (!n.visited && n.region.contains(p)) {
      n.visited = true;
      return;  // regions partition the map; at most one match
    }
    if (n.visited && n.region.contains(p)) return;
  }
}

const GraphNode* SpatialGraph::find(int id) const {
  for (const auto& n : nodes_) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

}  // namespace benthos
