#pragma once

#include <vector>

#include "covertnet/config.hpp"
#include "covertnet/geometry.hpp"
#include "covertnet/netgen.hpp"

namespace covertnet {

/// Square no-transmit zone around one warden, snapped to the cell grid so
/// the warden sits in the center cell (nine cells at gamma = 1/2). Width is
/// an integer number of cells.
struct PreservationRegion {
  Vec2 center;        // warden position
  Rect rect;          // cell-snapped block, clipped to the unit square
  Rect formula_rect;  // exact square of the formula width, clipped
  int cx0 = 0, cx1 = -1, cy0 = 0, cy1 = -1;  // inclusive cell span
  double b = 0.0;     // snapped width, multiple of the cell side
};

struct ExpandedRegion {
  std::vector<int> member_regions;
  std::vector<Vec2> hull;    // convex closure of member square corners
  std::vector<int> cells;    // sorted cell indices intersecting the hull
  int cx0 = 0, cx1 = -1, cy0 = 0, cy1 = -1;  // cell bounding box
};

using ExpandedRegionSet = std::vector<ExpandedRegion>;

/// Region width in cells for the configured gamma: ceil(c_b n^{-gamma}
/// sqrt(log n) / side), at least one cell.
int preservation_width_cells(const NetworkConfig& cfg, const CellGrid& grid);

/// The unrounded width c_b n^{-gamma} sqrt(log n). Clustering uses this
/// value when the snapped width is coarser, since flooring the width to a
/// whole cell would also inflate the chaining threshold.
double preservation_formula_width(const NetworkConfig& cfg);


/// Per-node flag: inside some warden's formula-width preservation square.
/// Node-level accounting for the cooperative schemes, free of the one-cell
/// snapping floor.
std::vector<char> nodes_in_formula_squares(const std::vector<Vec2>& nodes,
                                           const std::vector<Vec2>& wardens,
                                           const NetworkConfig& cfg, const CellGrid& grid);

std::vector<PreservationRegion> build_regions(const std::vector<Vec2>& wardens,
                                              const NetworkConfig& cfg, const CellGrid& grid);

/// Union-find closure of "inter-region gap < b", measured between the exact
/// formula squares (snapping regions to whole cells would also inflate the
/// chaining metric). Returns clusters as index lists; every region lands in
/// exactly one cluster.
std::vector<std::vector<int>> cluster_regions(const std::vector<PreservationRegion>& regions,
                                              double b);

ExpandedRegion expand_cluster(const std::vector<int>& cluster,
                              const std::vector<PreservationRegion>& regions,
                              const CellGrid& grid);

ExpandedRegionSet expand_all(const std::vector<std::vector<int>>& clusters,
                             const std::vector<PreservationRegion>& regions,
                             const CellGrid& grid);

/// True iff some expanded region holds more than 4 kappa log n members.
bool check_cluster_bound(const ExpandedRegionSet& expanded, const NetworkConfig& cfg);

}  // namespace covertnet
