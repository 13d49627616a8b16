#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "covertnet/preserve.hpp"
#include "covertnet/route.hpp"

using namespace covertnet;

namespace {

// Hand-built grid with a given dim; nodes placed at cell centers.
struct Fixture {
  CellGrid grid;
  NetworkInstance inst;

  explicit Fixture(int dim) {
    grid.dim = dim;
    grid.side = 1.0 / dim;
    grid.side_nominal = grid.side;
    grid.occupancy.assign(static_cast<std::size_t>(dim) * dim, {});
  }

  int add_node(int cx, int cy) {
    inst.legit.push_back({(cx + 0.5) * grid.side, (cy + 0.5) * grid.side});
    inst.n_l = static_cast<int>(inst.legit.size());
    grid.occupancy[grid.index(cx, cy)].push_back(inst.n_l - 1);
    return inst.n_l - 1;
  }

  void add_pair(int cx0, int cy0, int cx1, int cy1) {
    const int s = add_node(cx0, cy0);
    const int d = add_node(cx1, cy1);
    inst.pairs.emplace_back(s, d);
  }

  // Axis-aligned block of forbidden cells as one expanded region.
  ExpandedRegionSet block(int cx0, int cy0, int cx1, int cy1) const {
    ExpandedRegion er;
    er.cx0 = cx0;
    er.cx1 = cx1;
    er.cy0 = cy0;
    er.cy1 = cy1;
    er.hull = {{cx0 * grid.side, cy0 * grid.side},
               {(cx1 + 1) * grid.side, cy0 * grid.side},
               {(cx1 + 1) * grid.side, (cy1 + 1) * grid.side},
               {cx0 * grid.side, (cy1 + 1) * grid.side}};
    for (int cy = cy0; cy <= cy1; ++cy)
      for (int cx = cx0; cx <= cx1; ++cx) er.cells.push_back(grid.index(cx, cy));
    return {er};
  }
};

}  // namespace

TEST_CASE("direct path runs horizontally then vertically") {
  Fixture f(8);
  f.add_pair(0, 0, 3, 2);
  const RoutePlan plan = build_direct_paths(f.inst, f.grid);
  REQUIRE(plan.paths.size() == 1);
  const std::vector<int> expect = {f.grid.index(0, 0), f.grid.index(1, 0), f.grid.index(2, 0),
                                   f.grid.index(3, 0), f.grid.index(3, 1), f.grid.index(3, 2)};
  CHECK(plan.paths[0] == expect);
}

TEST_CASE("same-cell pair has a single-cell path with load one") {
  Fixture f(8);
  f.add_pair(4, 4, 4, 4);
  const RoutePlan plan = build_direct_paths(f.inst, f.grid);
  CHECK(plan.paths[0].size() == 1);
  CHECK(max_cell_load(plan) == 1);
}

TEST_CASE("no expanded regions leave the plan unchanged") {
  Fixture f(8);
  f.add_pair(0, 0, 7, 7);
  const RoutePlan direct = build_direct_paths(f.inst, f.grid);
  const ObstacleSet obs = make_obstacles({}, f.grid, f.grid.side);
  const RoutePlan plan = detour_paths(direct, obs, f.inst, f.grid);
  CHECK(plan.paths == direct.paths);
}

TEST_CASE("VDP detour offset follows (L1 mod b)/2") {
  // Region spans columns 6..10 on a 24-grid; the VDP runs up column 7.
  // Farthest parallel edge is the right one: L1 = (11 - 7.5) cells; with
  // b = 2 cells the offset is (1.5 mod 2)/2 = 0.75 cells -> 1 cell, and the
  // detour hugs the left side at column 6 - 1 - 1 = 4.
  Fixture f(24);
  f.add_pair(7, 1, 7, 20);
  const auto regions = f.block(6, 8, 10, 12);
  const double b = 2.0 * f.grid.side;
  const ObstacleSet obs = make_obstacles(regions, f.grid, b);
  const RoutePlan plan = detour_paths(build_direct_paths(f.inst, f.grid), obs, f.inst, f.grid);
  REQUIRE(!plan.outage[0]);
  // While crossing the blocked rows the path must sit exactly on the offset
  // lane (column 4); connector legs below/above the region are free.
  std::set<int> lanes;
  for (int c : plan.paths[0]) {
    const int row = c / f.grid.dim;
    if (row >= 8 && row <= 12) lanes.insert(c % f.grid.dim);
  }
  CHECK(lanes == std::set<int>{4});
  for (int c : plan.paths[0]) CHECK(!obs.blocked(c));
}

TEST_CASE("paths never enter expanded regions and keep their endpoints") {
  NetworkConfig cfg;
  cfg.n = 8192;
  cfg.kappa = 0.5;
  cfg.seed = 31;
  CounterRng rng(cfg.seed);
  const auto inst = generate_instance(cfg, rng);
  const CellGrid grid = build_cell_grid(inst, cfg.n);
  const auto regions = build_regions(inst.wardens, cfg, grid);
  const double b = preservation_width_cells(cfg, grid) * grid.side;
  const auto expanded =
      expand_all(cluster_regions(regions, preservation_formula_width(cfg)), regions, grid);
  const ObstacleSet obs = make_obstacles(expanded, grid, b);
  const RoutePlan plan = detour_paths(build_direct_paths(inst, grid), obs, inst, grid);

  for (std::size_t i = 0; i < plan.paths.size(); ++i) {
    if (plan.outage[i]) {
      CHECK(plan.paths[i].empty());
      continue;
    }
    const auto& path = plan.paths[i];
    REQUIRE(!path.empty());
    // Endpoints preserved (the first/last cell may be a forbidden endpoint
    // cell opened by the single boundary hop).
    CHECK(path.front() == grid.cell_of(inst.legit[inst.pairs[i].first]));
    CHECK(path.back() == grid.cell_of(inst.legit[inst.pairs[i].second]));
    // Adjacency and no relaying inside expanded regions.
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const int ax = path[k] % grid.dim, ay = path[k] / grid.dim;
      const int bx = path[k + 1] % grid.dim, by = path[k + 1] / grid.dim;
      CHECK(std::abs(ax - bx) + std::abs(ay - by) == 1);
    }
    for (std::size_t k = 1; k + 1 < path.size(); ++k) CHECK(!obs.blocked(path[k]));
  }

  // Load conservation: total load equals the sum of path lengths.
  long total_load = 0, total_len = 0;
  for (int v : plan.load) total_load += v;
  for (const auto& p : plan.paths) total_len += static_cast<long>(p.size());
  CHECK(total_load == total_len);
}

TEST_CASE("pair enclosed on all sides lands in outage") {
  Fixture f(16);
  f.add_pair(8, 8, 1, 1);
  // Ring of forbidden cells fully around the source cell.
  ExpandedRegionSet ring;
  auto add = [&](int cx0, int cy0, int cx1, int cy1) {
    const auto blk = f.block(cx0, cy0, cx1, cy1);
    ring.push_back(blk.front());
  };
  add(6, 6, 10, 7);
  add(6, 9, 10, 10);
  add(6, 8, 7, 8);
  add(9, 8, 10, 8);
  const ObstacleSet obs = make_obstacles(ring, f.grid, f.grid.side);
  const RoutePlan plan = detour_paths(build_direct_paths(f.inst, f.grid), obs, f.inst, f.grid);
  CHECK(plan.outage[0]);
  CHECK(outage_fraction(plan, f.inst) == doctest::Approx(1.0));
}

TEST_CASE("max load of disjoint parallel paths is one") {
  Fixture f(8);
  for (int y = 0; y < 4; ++y) f.add_pair(0, y, 7, y);
  RoutePlan plan = build_direct_paths(f.inst, f.grid);
  CHECK(max_cell_load(plan) == 1);
  CHECK(outage_fraction(plan, f.inst) == 0.0);
  RoutePlan empty;
  empty.dim = 8;
  CHECK(max_cell_load(empty) == 0);
}

TEST_CASE("detour offsets spread parallel paths over distinct lanes") {
  // A family of VDPs with L1 values spanning more than b must see at least
  // two distinct offsets.
  Fixture f(32);
  for (int x = 10; x <= 15; ++x) f.add_pair(x, 1, x, 30);
  const auto regions = f.block(8, 12, 17, 18);
  const double b = 3.0 * f.grid.side;
  const ObstacleSet obs = make_obstacles(regions, f.grid, b);
  const RoutePlan plan = detour_paths(build_direct_paths(f.inst, f.grid), obs, f.inst, f.grid);
  std::set<int> lanes;
  for (std::size_t i = 0; i < plan.paths.size(); ++i) {
    if (plan.outage[i]) continue;
    // Lane: the column occupied while crossing the blocked rows.
    for (int c : plan.paths[i])
      if (c / f.grid.dim == 15) lanes.insert(c % f.grid.dim);
  }
  CHECK(lanes.size() >= 2);
}

TEST_CASE("outage fraction counts both endpoints and the odd node") {
  Fixture f(8);
  f.add_pair(0, 0, 7, 7);
  f.add_pair(1, 0, 6, 7);
  f.inst.unpaired = f.add_node(3, 3);
  RoutePlan plan = build_direct_paths(f.inst, f.grid);
  plan.outage[1] = 1;
  plan.paths[1].clear();
  CHECK(outage_fraction(plan, f.inst) == doctest::Approx(3.0 / 5.0));
}

TEST_CASE("max cell load concentrates like sqrt(n log n) without wardens") {
  // Classical MH load concentration: slope of log(max load) vs log n near
  // one half.
  std::vector<double> ns = {2048, 8192, 32768};
  std::vector<double> loads;
  for (double n : ns) {
    double mean = 0.0;
    for (int t = 0; t < 5; ++t) {
      NetworkConfig cfg;
      cfg.n = n;
      cfg.seed = 900 + t;
      CounterRng rng(cfg.seed);
      auto inst = generate_instance(cfg, rng);
      inst.wardens.clear();
      inst.n_w = 0;
      const CellGrid grid = build_cell_grid(inst, n);
      mean += max_cell_load(build_direct_paths(inst, grid));
    }
    loads.push_back(mean / 5.0);
  }
  const double slope = std::log(loads.back() / loads.front()) / std::log(ns.back() / ns.front());
  CHECK(slope > 0.4);
  CHECK(slope < 0.6);
}
