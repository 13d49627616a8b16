#pragma once

#include <cstdint>
#include <vector>

#include "covertnet/netgen.hpp"
#include "covertnet/preserve.hpp"

namespace covertnet {

/// Forbidden cells plus per-region bounding boxes, as consumed by the
/// detouring rules. Built once per instance from the expanded regions.
struct ObstacleSet {
  int dim = 0;
  double side = 0.0;
  double b = 0.0;                 // preservation width, sets detour offsets
  std::vector<std::int32_t> region_of;  // cell -> expanded region index, -1 free
  std::vector<ExpandedRegion> regions;

  bool blocked(int cell) const { return region_of[cell] >= 0; }
  bool empty() const { return regions.empty(); }
};

ObstacleSet make_obstacles(const ExpandedRegionSet& expanded, const CellGrid& grid, double b);

struct RoutePlan {
  int dim = 0;
  std::vector<std::vector<int>> paths;  // per pair, cell indices; empty if outage
  std::vector<char> outage;             // per pair
  std::vector<int> load;                // per cell traversal count
  int max_detour_depth = 0;
  bool depth_flag = false;              // a detour needed recursion depth > 10
};

/// Horizontal data path from the source cell, then vertical to the
/// destination cell. No obstacle handling.
RoutePlan build_direct_paths(const NetworkInstance& inst, const CellGrid& grid);

/// Re-route every path crossing an expanded region: rectilinear bypass on the
/// side opposite the farthest parallel edge, offset (L1 mod b)/2 from the
/// border. Infeasible pairs (and pairs with an endpoint inside a region) move
/// to outage.
RoutePlan detour_paths(const RoutePlan& plan, const ObstacleSet& obstacles,
                       const NetworkInstance& inst, const CellGrid& grid);

int max_cell_load(const RoutePlan& plan);

/// Outage-affected nodes over n_l; both endpoints of each outage pair plus
/// the odd unpaired node.
double outage_fraction(const RoutePlan& plan, const NetworkInstance& inst);

}  // namespace covertnet
