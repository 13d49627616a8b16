#include "covertnet/netgen.hpp"

#include <cmath>
#include <numeric>

namespace covertnet {

std::vector<Vec2> sample_ppp(double density, CounterRng& rng) {
  if (!std::isfinite(density) || density < 0.0)
    throw ConfigError("p.p.p. density must be finite and non-negative");
  const std::int64_t count = rng.poisson(density);
  std::vector<Vec2> pts(static_cast<std::size_t>(count));
  for (auto& p : pts) {
    p.x = rng.uniform();
    p.y = rng.uniform();
  }
  return pts;
}

void pair_nodes(NetworkInstance& inst, CounterRng& rng) {
  const int n = static_cast<int>(inst.legit.size());
  if (n < 2) throw ConfigError("degenerate instance: fewer than 2 legitimate nodes");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  inst.pairs.clear();
  inst.pairs.reserve(n / 2);
  for (int i = 0; i + 1 < n; i += 2) inst.pairs.emplace_back(order[i], order[i + 1]);
  inst.unpaired = (n % 2 == 1) ? std::optional<int>(order[n - 1]) : std::nullopt;
}

NetworkInstance generate_instance(const NetworkConfig& cfg, CounterRng& rng) {
  cfg.validate();
  NetworkInstance inst;
  inst.legit = sample_ppp(cfg.n, rng);
  inst.wardens = sample_ppp(std::pow(cfg.n, cfg.kappa), rng);
  inst.n_l = static_cast<int>(inst.legit.size());
  inst.n_w = static_cast<int>(inst.wardens.size());
  if (inst.n_l >= 2) pair_nodes(inst, rng);
  return inst;
}

CellGrid build_cell_grid(const NetworkInstance& inst, double n) {
  if (!(n >= 3.0)) throw ConfigError("cell grid requires n >= 3");
  CellGrid g;
  g.side_nominal = std::sqrt(2.0 * std::log(n) / n);
  g.dim = static_cast<int>(std::ceil(1.0 / g.side_nominal - 1e-12));
  g.side = 1.0 / g.dim;
  g.occupancy.assign(static_cast<std::size_t>(g.dim) * g.dim, {});
  for (int i = 0; i < static_cast<int>(inst.legit.size()); ++i)
    g.occupancy[g.cell_of(inst.legit[i])].push_back(i);
  return g;
}

CellGrid build_grid_with_dim(const std::vector<Vec2>& points, int dim, double side_nominal) {
  if (dim < 1) throw ConfigError("grid dim must be >= 1");
  CellGrid g;
  g.dim = dim;
  g.side_nominal = side_nominal;
  g.side = 1.0 / dim;
  g.occupancy.assign(static_cast<std::size_t>(dim) * dim, {});
  for (int i = 0; i < static_cast<int>(points.size()); ++i)
    g.occupancy[g.cell_of(points[i])].push_back(i);
  return g;
}

OccupancyStats occupancy_stats(const CellGrid& grid, double n) {
  OccupancyStats s;
  s.min_count = grid.occupancy.empty() ? 0 : static_cast<int>(grid.occupancy.front().size());
  for (const auto& cell : grid.occupancy) {
    const int c = static_cast<int>(cell.size());
    s.min_count = std::min(s.min_count, c);
    s.max_count = std::max(s.max_count, c);
  }
  s.violation = s.min_count == 0 || s.max_count > 4.0 * std::log(n);
  return s;
}

}  // namespace covertnet
