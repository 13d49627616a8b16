#include "covertnet/preserve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace covertnet {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

double preservation_formula_width(const NetworkConfig& cfg) {
  return cfg.resolved_c_b() * std::pow(cfg.n, -cfg.resolved_gamma()) * std::sqrt(std::log(cfg.n));
}

int preservation_width_cells(const NetworkConfig& cfg, const CellGrid& grid) {
  const int w =
      static_cast<int>(std::ceil(preservation_formula_width(cfg) / grid.side_nominal - 1e-9));
  return std::max(1, w);
}


std::vector<char> nodes_in_formula_squares(const std::vector<Vec2>& nodes,
                                           const std::vector<Vec2>& wardens,
                                           const NetworkConfig& cfg, const CellGrid& grid) {
  const double half = preservation_formula_width(cfg) / 2.0;
  // Bucket wardens by cell; the half-width never exceeds a few cells.
  const int reach = std::max(1, static_cast<int>(std::ceil(half / grid.side)));
  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(grid.dim) * grid.dim);
  for (int w = 0; w < static_cast<int>(wardens.size()); ++w)
    buckets[grid.cell_of(wardens[w])].push_back(w);
  std::vector<char> inside(nodes.size(), 0);
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    const int cx = grid.cell_x(nodes[i].x), cy = grid.cell_x(nodes[i].y);
    for (int dy = -reach; dy <= reach && !inside[i]; ++dy)
      for (int dx = -reach; dx <= reach && !inside[i]; ++dx) {
        const int nx = cx + dx, ny = cy + dy;
        if (nx < 0 || nx >= grid.dim || ny < 0 || ny >= grid.dim) continue;
        for (int w : buckets[grid.index(nx, ny)]) {
          if (std::fabs(nodes[i].x - wardens[w].x) <= half &&
              std::fabs(nodes[i].y - wardens[w].y) <= half) {
            inside[i] = 1;
            break;
          }
        }
      }
  }
  return inside;
}

std::vector<PreservationRegion> build_regions(const std::vector<Vec2>& wardens,
                                              const NetworkConfig& cfg, const CellGrid& grid) {
  const int w = preservation_width_cells(cfg, grid);
  std::vector<PreservationRegion> regions;
  regions.reserve(wardens.size());
  for (const Vec2& wn : wardens) {
    PreservationRegion r;
    r.center = wn;
    r.b = w * grid.side;
    const int cx = grid.cell_x(wn.x);
    const int cy = grid.cell_x(wn.y);
    // Snap a w-cell block around the warden's cell; even widths extend toward
    // the warden's side of the cell.
    const int left = (w - 1) / 2 + ((w % 2 == 0 && wn.x < (cx + 0.5) * grid.side) ? 1 : 0);
    const int below = (w - 1) / 2 + ((w % 2 == 0 && wn.y < (cy + 0.5) * grid.side) ? 1 : 0);
    r.cx0 = std::max(0, cx - left);
    r.cx1 = std::min(grid.dim - 1, cx - left + w - 1);
    r.cy0 = std::max(0, cy - below);
    r.cy1 = std::min(grid.dim - 1, cy - below + w - 1);
    r.rect = {{r.cx0 * grid.side, r.cy0 * grid.side},
              {(r.cx1 + 1) * grid.side, (r.cy1 + 1) * grid.side}};
    const double half = preservation_formula_width(cfg) / 2.0;
    r.formula_rect = {{std::max(0.0, wn.x - half), std::max(0.0, wn.y - half)},
                      {std::min(1.0, wn.x + half), std::min(1.0, wn.y + half)}};
    regions.push_back(r);
  }
  return regions;
}

std::vector<std::vector<int>> cluster_regions(const std::vector<PreservationRegion>& regions,
                                              double b) {
  const int n = static_cast<int>(regions.size());
  UnionFind uf(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rect_gap(regions[i].formula_rect, regions[j].formula_rect) < b) uf.unite(i, j);

  std::vector<std::vector<int>> clusters;
  std::vector<int> root_to_cluster(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = uf.find(i);
    if (root_to_cluster[r] < 0) {
      root_to_cluster[r] = static_cast<int>(clusters.size());
      clusters.emplace_back();
    }
    clusters[root_to_cluster[r]].push_back(i);
  }
  return clusters;
}

ExpandedRegion expand_cluster(const std::vector<int>& cluster,
                              const std::vector<PreservationRegion>& regions,
                              const CellGrid& grid) {
  ExpandedRegion er;
  er.member_regions = cluster;
  std::vector<Vec2> corners;
  corners.reserve(cluster.size() * 4);
  for (int idx : cluster) {
    const Rect& r = regions[idx].rect;
    corners.push_back(r.lo);
    corners.push_back({r.hi.x, r.lo.y});
    corners.push_back(r.hi);
    corners.push_back({r.lo.x, r.hi.y});
  }
  er.hull = convex_hull(std::move(corners));
  if (er.hull.empty()) return er;

  Rect bbox = {er.hull.front(), er.hull.front()};
  for (const Vec2& v : er.hull) {
    bbox.lo.x = std::min(bbox.lo.x, v.x);
    bbox.lo.y = std::min(bbox.lo.y, v.y);
    bbox.hi.x = std::max(bbox.hi.x, v.x);
    bbox.hi.y = std::max(bbox.hi.y, v.y);
  }
  er.cx0 = grid.cell_x(bbox.lo.x + 1e-12);
  er.cx1 = grid.cell_x(bbox.hi.x - 1e-12);
  er.cy0 = grid.cell_x(bbox.lo.y + 1e-12);
  er.cy1 = grid.cell_x(bbox.hi.y - 1e-12);

  // A cell belongs iff its square and the hull overlap with positive area;
  // pure boundary contact does not count.
  const double area_tol = 1e-12 * grid.side * grid.side;
  for (int cy = er.cy0; cy <= er.cy1; ++cy)
    for (int cx = er.cx0; cx <= er.cx1; ++cx) {
      const auto clipped = clip_polygon(er.hull, grid.cell_rect(cx, cy));
      if (std::fabs(polygon_area(clipped)) > area_tol) er.cells.push_back(grid.index(cx, cy));
    }
  std::sort(er.cells.begin(), er.cells.end());
  return er;
}

ExpandedRegionSet expand_all(const std::vector<std::vector<int>>& clusters,
                             const std::vector<PreservationRegion>& regions,
                             const CellGrid& grid) {
  ExpandedRegionSet out;
  out.reserve(clusters.size());
  for (const auto& c : clusters) out.push_back(expand_cluster(c, regions, grid));
  return out;
}

bool check_cluster_bound(const ExpandedRegionSet& expanded, const NetworkConfig& cfg) {
  const double limit = 4.0 * cfg.kappa * std::log(cfg.n);
  for (const auto& er : expanded)
    if (static_cast<double>(er.member_regions.size()) > limit) return true;
  return false;
}

}  // namespace covertnet
