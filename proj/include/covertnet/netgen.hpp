#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "covertnet/config.hpp"
#include "covertnet/geometry.hpp"
#include "covertnet/rng.hpp"

namespace covertnet {

struct NetworkInstance {
  std::vector<Vec2> legit;
  std::vector<Vec2> wardens;
  std::vector<std::pair<int, int>> pairs;  // (source, destination) indices
  std::optional<int> unpaired;             // odd leftover node, marked outage
  int n_l = 0;
  int n_w = 0;
};

/// Square tessellation of the unit area. dim = ceil(1/side_nominal) and cells
/// are uniformly 1/dim wide, slightly narrower than the nominal
/// sqrt(2 log n / n) so the unit square is covered without boundary slivers.
struct CellGrid {
  int dim = 0;
  double side_nominal = 0.0;  // sqrt(2 log n / n)
  double side = 0.0;          // 1/dim
  std::vector<std::vector<int>> occupancy;  // cell index -> node indices

  int cell_x(double x) const {
    int c = static_cast<int>(x * dim);
    return c < 0 ? 0 : (c >= dim ? dim - 1 : c);
  }
  int index(int cx, int cy) const { return cy * dim + cx; }
  int cell_of(const Vec2& p) const { return index(cell_x(p.x), cell_x(p.y)); }
  Rect cell_rect(int cx, int cy) const {
    return {{cx * side, cy * side}, {(cx + 1) * side, (cy + 1) * side}};
  }
  int num_cells() const { return dim * dim; }
};

struct OccupancyStats {
  int min_count = 0;
  int max_count = 0;
  bool violation = false;  // some cell empty or above 4 log n
};

/// Poisson point process of the given density on the unit square.
std::vector<Vec2> sample_ppp(double density, CounterRng& rng);

/// Uniformly random perfect matching; an odd leftover node goes to outage.
void pair_nodes(NetworkInstance& inst, CounterRng& rng);

/// Full instance: legitimate p.p.p. of density n, wardens of density n^kappa,
/// S-D pairing.
NetworkInstance generate_instance(const NetworkConfig& cfg, CounterRng& rng);

CellGrid build_cell_grid(const NetworkInstance& inst, double n);

/// Coarse variant used by the hybrid scheme: dim chosen by the caller.
CellGrid build_grid_with_dim(const std::vector<Vec2>& points, int dim, double side_nominal);

OccupancyStats occupancy_stats(const CellGrid& grid, double n);

}  // namespace covertnet
