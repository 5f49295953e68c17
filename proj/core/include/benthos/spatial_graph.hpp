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

#include "benthos/belief.hpp"
#include "benthos/grid.hpp"

namespace benthos {

enum class NodeLevel : std::uint8_t { kMacro, kMicro };

/// One active region of the adaptive spatial decomposition: a rectangle,
/// its centroid, aggregated substrate statistics (micro nodes only), and
/// the area weight relative to a nominal micro region.
struct GraphNode {
  int id = -1;
  Vec2 center;
  Rect region;
  NodeLevel level = NodeLevel::kMacro;
  double rho_bar = 0.5;
  double nu2_bar = 0.25;
  double area_weight = 1.0;
  bool visited = false;
};

/// Adaptive macro/micro decomposition of the workspace. The active nodes
/// partition the map cells at all times: a split removes the macro parent
/// and inserts micro children that tile its rectangle exactly.
class SpatialGraph {
 public:
  SpatialGraph() = default;

  /// Tiles the workspace with macro regions of nominal size
  /// `macro_size` x `macro_size` meters (edge regions clipped to bounds).
  SpatialGraph(const GridSpec& spec, double macro_size, double micro_size);

  const std::vector<GraphNode>& nodes() const { return nodes_; }
  std::vector<GraphNode>& nodes() { return nodes_; }

  int macro_count() const;
  int micro_count() const;
  double micro_size() const { return micro_size_; }

  /// Splits every macro node whose region's mean substrate entropy is
  /// below `h_split` (nats) into micro children. Returns the number of
  /// macro nodes split.
  int maybe_split(const BeliefState& belief, double h_split);

  /// Marks the active node containing `p` (if any) as visited.
  void mark_visited_at(const Vec2& p);

  const GraphNode* find(int id) const;

  /// Cells of a node's region, for aggregation.
  std::vector<int> region_cells(const GraphNode& node) const;

 private:
  GraphNode make_node(const Rect& region, NodeLevel level);

  GridSpec spec_;
  double macro_size_ = 4.0;
  double micro_size_ = 2.0;
  std::vector<GraphNode> nodes_;
  int next_id_ = 0;
};

}  // namespace benthos
