#include "covertnet/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "covertnet/preserve.hpp"

namespace covertnet {

namespace {

double short_range_power_exponent(const NetworkConfig& cfg) {
  return (0.5 - cfg.kappa / 2.0) * (cfg.alpha - 2.0);
}

/// Average-power cap of the modified HC proof, before constant calibration.
double hc_nominal_cap(const NetworkConfig& cfg, double n) {
  NetworkConfig at = cfg;
  at.n = n;
  const double l = at.resolved_l();
  const double cap = std::pow(n, short_range_power_exponent(cfg)) / (2.0 * std::log(n)) *
                     std::sqrt(cfg.delta / l) * std::pow(2.0 * std::log(n) / n, cfg.alpha / 2.0);
  return std::min(cap, cfg.P / n);
}

double hc_gamma_p(const NetworkConfig& cfg, double n) {
  const double cap = hc_nominal_cap(cfg, n);
  return std::max(1.0, std::log(cfg.P / cap) / std::log(n));
}

std::vector<char> raw_blocked_cells(const std::vector<PreservationRegion>& regions,
                                    const CellGrid& grid) {
  std::vector<char> blocked(static_cast<std::size_t>(grid.dim) * grid.dim, 0);
  for (const auto& r : regions)
    for (int cy = r.cy0; cy <= r.cy1; ++cy)
      for (int cx = r.cx0; cx <= r.cx1; ++cx) blocked[grid.index(cx, cy)] = 1;
  return blocked;
}

struct Geometry {
  CellGrid grid;
  std::vector<PreservationRegion> regions;
  ExpandedRegionSet expanded;
  ObstacleSet obstacles;
  double b = 0.0;
};

Geometry build_geometry(const NetworkConfig& cfg, const NetworkInstance& inst) {
  Geometry g;
  g.grid = build_cell_grid(inst, cfg.n);
  g.regions = build_regions(inst.wardens, cfg, g.grid);
  g.b = preservation_width_cells(cfg, g.grid) * g.grid.side;
  const auto clusters = cluster_regions(g.regions, preservation_formula_width(cfg));
  g.expanded = expand_all(clusters, g.regions, g.grid);
  g.obstacles = make_obstacles(g.expanded, g.grid, g.b);
  return g;
}

[[noreturn]] void covertness_failure(const std::string& scheme, const NetworkConfig& cfg,
                                     const CovertnessReport& rep) {
  throw CovertnessError("covertness violated by scheme '" + scheme +
                        "' (worst KL=" + std::to_string(rep.worst_kl) +
                        ", delta=" + std::to_string(cfg.delta) + ", n=" + std::to_string(cfg.n) +
                        ", kappa=" + std::to_string(cfg.kappa) +
                        ", alpha=" + std::to_string(cfg.alpha) + "): budget calibration bug");
}

}  // namespace

double short_range_snr(const NetworkConfig& cfg) {
  return std::pow(cfg.n, short_range_power_exponent(cfg)) / std::sqrt(cfg.resolved_l());
}

HcRecursionState hc_recursion_state(const NetworkConfig& cfg, double n) {
  HcRecursionState st;
  st.gamma_p = hc_gamma_p(cfg, n);
  st.iterations = cfg.hc_depth;
  const auto seq = hc_exponent_recursion(1.0 - st.gamma_p, st.gamma_p, cfg.hc_depth);
  st.b = seq.back();
  st.M = std::clamp(std::pow(n, st.gamma_p / (2.0 - seq[seq.size() - 2])), 1.0, n);
  return st;
}

std::vector<double> hc_exponent_recursion(double b0, double gamma_p, int iterations) {
  if (b0 >= 1.0) throw std::domain_error("hc recursion requires b0 < 1");
  if (gamma_p < 1.0) throw std::domain_error("hc recursion requires gamma_p >= 1");
  std::vector<double> seq;
  seq.reserve(iterations + 1);
  seq.push_back(b0);
  double b = b0;
  for (int i = 0; i < iterations; ++i) {
    b = gamma_p / (2.0 - b) + 1.0 - gamma_p;
    seq.push_back(b);
  }
  return seq;
}

MimoSchedule build_mimo_schedule(int M, int n_slots, double l) {
  if (M > n_slots) throw ConfigError("infeasible schedule: M exceeds n_slots");
  if (M < 1 || n_slots < 1) throw ConfigError("schedule needs M >= 1 and n_slots >= 1");
  MimoSchedule s;
  s.n_slots = n_slots;
  s.l = l;
  s.slots.reserve(M);
  for (int j = 0; j < M; ++j)
    s.slots.push_back(static_cast<int>((static_cast<long>(j) * n_slots) / M));
  return s;
}

std::pair<int, int> schedule_window_counts(const MimoSchedule& s) {
  const long win = std::max(1L, std::lround(s.l));
  std::vector<int> per_slot(s.n_slots, 0);
  for (int t : s.slots) ++per_slot[t];
  const long cycles = win / s.n_slots;
  const long rem = win % s.n_slots;
  const long base = cycles * static_cast<long>(s.slots.size());
  long cur = 0;
  for (long t = 0; t < rem; ++t) cur += per_slot[t % s.n_slots];
  long lo = cur, hi = cur;
  for (int start = 1; start < s.n_slots; ++start) {
    cur -= per_slot[start - 1];
    cur += per_slot[(start - 1 + rem) % s.n_slots];
    lo = std::min(lo, cur);
    hi = std::max(hi, cur);
  }
  return {static_cast<int>(base + lo), static_cast<int>(base + hi)};
}

MimoPowerCheck mimo_power_check(double n, double b) {
  if (b < 0.0 || b >= 1.0) throw std::domain_error("mimo_power_check requires 0 <= b < 1");
  MimoPowerCheck c;
  c.m_with = std::pow(n, 3.0 / (5.0 - 2.0 * b));
  c.exp_with = 9.0 / (10.0 - 4.0 * b) - 0.5;
  c.m_without = std::pow(n, 1.0 / (2.0 - b));
  c.exp_without = 1.0 / (2.0 - b);
  return c;
}

double iterate_throughput_map(double b0, int iterations, bool with_scaling) {
  double b = b0;
  for (int i = 0; i < iterations; ++i)
    b = with_scaling ? 9.0 / (10.0 - 4.0 * b) - 0.5 : 1.0 / (2.0 - b);
  return b;
}

// ---------------------------------------------------------------------------
// Detoured MH
// ---------------------------------------------------------------------------

SchemeResult run_detoured_mh(const NetworkConfig& cfg, const NetworkInstance& inst) {
  cfg.validate();
  const ChannelModel ch = ChannelModel::from(cfg);
  Geometry geo = build_geometry(cfg, inst);

  // Nodes inside a preservation square never transmit; their pairs are out.
  const auto node_preserved =
      nodes_in_formula_squares(inst.legit, inst.wardens, cfg, geo.grid);
  RoutePlan direct = build_direct_paths(inst, geo.grid);
  for (std::size_t i = 0; i < inst.pairs.size(); ++i)
    if (node_preserved[inst.pairs[i].first] || node_preserved[inst.pairs[i].second])
      direct.outage[i] = 1;
  RoutePlan plan = detour_paths(direct, geo.obstacles, inst, geo.grid);

  SchemeResult res;
  res.scheme = "mh";
  res.n = cfg.n;
  res.n_l = inst.n_l;
  res.n_w = inst.n_w;
  res.pair_count = static_cast<int>(inst.pairs.size());
  res.max_detour_depth = plan.max_detour_depth;
  res.detour_depth_flag = plan.depth_flag;
  res.outage_frac = outage_fraction(plan, inst);

  const double p_mh = std::min(covert_power_mh(cfg), 9.0 * cfg.P);
  res.budget.p_mh = p_mh;
  const double r_hop = hop_rate(p_mh, cfg.n, ch);
  const int load = max_cell_load(plan);
  res.max_load = load;
  res.rate_per_pair = load > 0 ? r_hop / load : 0.0;
  int alive = 0;
  for (char o : plan.outage) alive += o ? 0 : 1;
  res.outage_pairs = res.pair_count - alive;
  res.throughput = alive * res.rate_per_pair;

  // Per-warden 9-TDMA phase interference from every loaded cell, worst-case
  // transmitter at the nearest cell corner, distance floored at b/2.
  std::vector<std::vector<int>> cells_by_phase(9);
  for (int c = 0; c < geo.grid.num_cells(); ++c)
    if (plan.load[c] > 0)
      cells_by_phase[(c % geo.grid.dim) % 3 + 3 * ((c / geo.grid.dim) % 3)].push_back(c);
  const auto gains =
      warden_gain_table(inst.wardens, geo.grid, ch, preservation_formula_width(cfg) / 2.0);
  std::vector<std::vector<double>> traces(inst.wardens.size(), std::vector<double>(9, 0.0));
  for (std::size_t w = 0; w < inst.wardens.size(); ++w)
    for (int ph = 0; ph < 9; ++ph) {
      double sum = 0.0;
      for (int c : cells_by_phase[ph]) sum += gains[w][c];
      traces[w][ph] = sum * p_mh;
    }
  const CovertnessReport rep = kl_report(traces, cfg.resolved_l(), cfg.N0, cfg.delta);
  res.covert_pass = rep.pass;
  res.worst_kl = rep.worst_kl;
  res.worst_warden = rep.worst_warden;
  if (!rep.pass) covertness_failure("mh", cfg, rep);
  return res;
}

// ---------------------------------------------------------------------------
// Modified HC
// ---------------------------------------------------------------------------

namespace {

// Worst-case covertness scale for the modified HC trace model: occupancy
// envelope 8 log n per cell, warden at a central cell corner, every cell
// transmitting the average cap plus the spread MIMO bursts of the nearest
// cluster. KL scales with the square of the cap, so the admissible constant
// is exact.
double hc_power_constant(const NetworkConfig& cfg) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, double, double, double, double, double, double>,
                  double>
      cache;
  const auto key = std::make_tuple(cfg.kappa, cfg.alpha, cfg.resolved_gamma(), cfg.resolved_c_b(),
                                   cfg.delta, cfg.P, cfg.l_beta ? *cfg.l_beta : -1.0,
                                   cfg.l_beta ? -1.0 : cfg.l);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second * cfg.N0 / cfg.G;
  }

  double c_min = 1.0;
  for (int e = 9; e <= 19; ++e) {
    const double n = std::pow(2.0, e);
    NetworkConfig probe = cfg;
    probe.n = n;
    probe.N0 = 1.0;
    probe.G = 1.0;
    const double l = probe.resolved_l();
    NetworkInstance empty;
    const CellGrid grid = build_cell_grid(empty, n);
    const int w = preservation_width_cells(probe, grid);
    const double b = w * grid.side;
    const ChannelModel ch{1.0, cfg.alpha, 1.0};
    const double occ = 8.0 * std::log(n);
    const double cap = hc_nominal_cap(probe, n);

    const double M = hc_recursion_state(probe, n).M;
    const int n_slots = static_cast<int>(n);
    const int cluster_dim = std::max(1, static_cast<int>(std::ceil(std::sqrt(n / M))));

    const int cc = grid.dim / 2;
    const Vec2 pos{cc * grid.side, cc * grid.side};
    double base_gain = 0.0;
    double box_gain = 0.0;  // densest cluster-sized box centered on the warden
    const int half_box = std::max(1, grid.dim / cluster_dim) / 2 + 1;
    for (int cy = 0; cy < grid.dim; ++cy)
      for (int cx = 0; cx < grid.dim; ++cx) {
        const Rect r = grid.cell_rect(cx, cy);
        const double g = ch.gain(std::max(dist(pos, r.nearest_corner(pos)), b / 2.0));
        base_gain += g;
        if (std::abs(cx - cc) <= half_box && std::abs(cy - cc) <= half_box) box_gain += g;
      }
    const double i_base = cap * occ * base_gain;
    const double p_mimo = cap * std::sqrt(n_slots / M);
    const double i_mimo_peak = p_mimo * occ * box_gain;
    const double s_mimo_total = p_mimo * occ * base_gain;
    const double cnt = std::ceil(l * M / n_slots) + 1.0;
    const double kl = 0.5 * (l * i_base * i_base + 2.0 * i_base * cnt * s_mimo_total +
                             cnt * i_mimo_peak * s_mimo_total);
    if (kl > 0.0) c_min = std::min(c_min, std::sqrt(cfg.delta / kl));
  }
  {
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = c_min;
  }
  return c_min * cfg.N0 / cfg.G;
}

}  // namespace

SchemeResult run_modified_hc(const NetworkConfig& cfg, const NetworkInstance& inst) {
  cfg.validate();
  const ChannelModel ch = ChannelModel::from(cfg);
  const CellGrid grid = build_cell_grid(inst, cfg.n);
  const auto regions = build_regions(inst.wardens, cfg, grid);
  const double b = preservation_width_cells(cfg, grid) * grid.side;
  const auto blocked = raw_blocked_cells(regions, grid);

  SchemeResult res;
  res.scheme = "hc";
  res.n = cfg.n;
  res.n_l = inst.n_l;
  res.n_w = inst.n_w;
  res.pair_count = static_cast<int>(inst.pairs.size());

  const double c_hc = hc_power_constant(cfg);
  const double cap = c_hc * hc_nominal_cap(cfg, cfg.n);
  const HcRecursionState st = hc_recursion_state(cfg, cfg.n);
  const double b_final = st.b;
  const double M = st.M;
  res.M = M;
  res.recursion_depth = st.iterations;
  res.exponent_b = b_final;
  res.budget.p_hc_avg = cap;
  res.budget.mimo_scale = std::sqrt(M / cfg.n);

  // Cluster-tiling bookkeeping: clusters smaller than a preservation region
  // die on any overlap; larger ones keep their surviving fraction, and the
  // uniform per-pair rate carries the worst survivor.
  const double side_m = std::sqrt(M / cfg.n);
  const int cluster_dim = std::max(1, static_cast<int>(std::ceil(1.0 / side_m)));
  std::vector<int> tile_total(static_cast<std::size_t>(cluster_dim) * cluster_dim, 0);
  std::vector<int> tile_covered(tile_total.size(), 0);
  auto tile_of_cell = [&](int c) {
    const int cx = c % grid.dim, cy = c / grid.dim;
    const int tx = std::min(cluster_dim - 1,
                            static_cast<int>((cx + 0.5) * grid.side * cluster_dim));
    const int ty = std::min(cluster_dim - 1,
                            static_cast<int>((cy + 0.5) * grid.side * cluster_dim));
    return ty * cluster_dim + tx;
  };
  for (int c = 0; c < grid.num_cells(); ++c) {
    ++tile_total[tile_of_cell(c)];
    if (blocked[c]) ++tile_covered[tile_of_cell(c)];
  }
  const bool small_clusters = side_m < b;
  std::vector<char> tile_dead(tile_total.size(), 0);
  double worst_survive = 1.0;
  for (std::size_t t = 0; t < tile_total.size(); ++t) {
    if (tile_total[t] == 0) continue;
    const double covered = static_cast<double>(tile_covered[t]) / tile_total[t];
    if (small_clusters) {
      tile_dead[t] = covered > 0.0;
    } else {
      tile_dead[t] = covered >= 1.0;
      if (!tile_dead[t]) worst_survive = std::min(worst_survive, 1.0 - covered);
    }
  }

  int alive = 0;
  for (const auto& pr : inst.pairs) {
    const int cs = grid.cell_of(inst.legit[pr.first]);
    const int cd = grid.cell_of(inst.legit[pr.second]);
    const bool out = blocked[cs] || blocked[cd] || tile_dead[tile_of_cell(cs)] ||
                     tile_dead[tile_of_cell(cd)];
    alive += out ? 0 : 1;
  }
  res.outage_pairs = res.pair_count - alive;
  int outage_nodes = (inst.unpaired ? 1 : 0) + 2 * res.outage_pairs;
  res.outage_frac = inst.n_l > 0 ? static_cast<double>(outage_nodes) / inst.n_l : 0.0;

  // Exponent-level throughput anchored on the exact TDMA base rate; the
  // hierarchy contributes n^{b_L - b_0}.
  const double t_base = std::log1p(cfg.G * cap * cfg.n / cfg.N0);
  const double t_gross =
      t_base * std::pow(cfg.n, b_final - (1.0 - st.gamma_p)) * worst_survive;
  res.rate_per_pair = res.pair_count > 0 ? t_gross / res.pair_count : 0.0;
  res.throughput = alive * res.rate_per_pair;

  // Covertness: spread-schedule count bound per warden. Surviving nodes
  // transmit the average cap each slot; the scheduled cluster adds its
  // down-scaled MIMO burst.
  const auto gains = warden_gain_table(inst.wardens, grid, ch, b / 2.0);
  std::vector<double> surv_occ(grid.num_cells(), 0.0);
  for (int c = 0; c < grid.num_cells(); ++c)
    surv_occ[c] = blocked[c] ? 0.0 : static_cast<double>(grid.occupancy[c].size());
  const double l = cfg.resolved_l();
  const int n_slots = static_cast<int>(cfg.n);
  const double p_mimo = cap * std::sqrt(n_slots / M);
  const double cnt_plus = std::ceil(l * M / n_slots) + 1.0;

  std::vector<WardenKl> kls(inst.wardens.size());
  for (std::size_t w = 0; w < inst.wardens.size(); ++w) {
    double i_base = 0.0;
    std::vector<double> tile_i(tile_total.size(), 0.0);
    for (int c = 0; c < grid.num_cells(); ++c) {
      const double g = surv_occ[c] * gains[w][c];
      i_base += g;
      tile_i[tile_of_cell(c)] += g;
    }
    i_base *= cap;
    double sum_mimo = 0.0, sum_mimo_sq = 0.0, peak = 0.0;
    for (double ti : tile_i) {
      const double im = p_mimo * ti;
      sum_mimo += cnt_plus * im;
      sum_mimo_sq += cnt_plus * im * im;
      peak = std::max(peak, im);
    }
    WardenKl& kl = kls[w];
    const double n0sq = cfg.N0 * cfg.N0;
    kl.kl_sum = 0.5 * (l * i_base * i_base + 2.0 * i_base * sum_mimo + sum_mimo_sq) / n0sq;
    kl.max_window_inr = (i_base + peak) / cfg.N0;
    kl.kl_max_form = 0.5 * l * kl.max_window_inr * kl.max_window_inr;
  }
  const CovertnessReport rep = make_report(std::move(kls), cfg.delta);
  res.covert_pass = rep.pass;
  res.worst_kl = rep.worst_kl;
  res.worst_warden = rep.worst_warden;
  if (!rep.pass) covertness_failure("hc", cfg, rep);
  return res;
}

// ---------------------------------------------------------------------------
// Detoured hybrid HC-MH
// ---------------------------------------------------------------------------

namespace {

double hybrid_power_constant(const NetworkConfig& cfg) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, double, double, double, double, double, double>,
                  double>
      cache;
  const auto key = std::make_tuple(cfg.kappa, cfg.alpha, cfg.resolved_gamma(), cfg.resolved_c_b(),
                                   cfg.delta, cfg.P, cfg.l_beta ? *cfg.l_beta : -1.0,
                                   cfg.l_beta ? -1.0 : cfg.l);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second * cfg.N0 / cfg.G;
  }
  double c_min = 1.0;
  for (int e = 9; e <= 19; ++e) {
    const double n = std::pow(2.0, e);
    NetworkConfig probe = cfg;
    probe.n = n;
    probe.N0 = 1.0;
    probe.G = 1.0;
    const double l = probe.resolved_l();
    NetworkInstance empty;
    const CellGrid grid = build_cell_grid(empty, n);
    const double d_floor = preservation_formula_width(probe) / 2.0;
    const ChannelModel ch{1.0, cfg.alpha, 1.0};
    const double occ = 8.0 * std::log(n);
    const double p_node = 9.0 * hc_nominal_cap(probe, n);

    // Whole coarse tiles fire together under the coarse 9-TDMA; mirror the
    // scheme's own tiling at this density.
    const double s = std::pow(n, (0.5 - cfg.kappa / 2.0) * (cfg.alpha - 2.0)) / std::sqrt(l);
    const double m_raw = std::pow(s, 1.0 / (cfg.alpha / 2.0 - 1.0));
    if (m_raw <= 2.0 * std::log(n)) continue;  // degenerate: MH budget applies
    const double M = std::min(m_raw, n / 4.0);
    const int coarse_dim = std::max(2, static_cast<int>(std::ceil(std::sqrt(n / M) - 1e-12)));

    const int cc = grid.dim / 2;
    const Vec2 pos{cc * grid.side, cc * grid.side};
    double worst = 0.0;
    for (int phase = 0; phase < 9; ++phase) {
      double total = 0.0;
      for (int cy = 0; cy < grid.dim; ++cy)
        for (int cx = 0; cx < grid.dim; ++cx) {
          const int tx = std::min(coarse_dim - 1,
                                  static_cast<int>((cx + 0.5) * grid.side * coarse_dim));
          const int ty = std::min(coarse_dim - 1,
                                  static_cast<int>((cy + 0.5) * grid.side * coarse_dim));
          if (tx % 3 != phase % 3 || ty % 3 != phase / 3) continue;
          const Rect r = grid.cell_rect(cx, cy);
          total += occ * ch.gain(std::max(dist(pos, r.nearest_corner(pos)), d_floor));
        }
      worst = std::max(worst, total);
    }
    const double i_worst = p_node * worst;
    const double kl = 0.5 * l * i_worst * i_worst;
    if (kl > 0.0) c_min = std::min(c_min, std::sqrt(cfg.delta / kl));
  }
  {
    std::lock_guard<std::mutex> lock(mu);
    cache[key] = c_min;
  }
  return c_min * cfg.N0 / cfg.G;
}

// Connected components of fully-covered coarse cells become the obstacle set
// for global routing.
ExpandedRegionSet coarse_regions_from_blocked(const std::vector<char>& blocked_coarse, int dim) {
  ExpandedRegionSet out;
  std::vector<int> comp(blocked_coarse.size(), -1);
  for (int start = 0; start < static_cast<int>(blocked_coarse.size()); ++start) {
    if (!blocked_coarse[start] || comp[start] >= 0) continue;
    ExpandedRegion er;
    std::vector<int> stack{start};
    comp[start] = static_cast<int>(out.size());
    er.cx0 = er.cx1 = start % dim;
    er.cy0 = er.cy1 = start / dim;
    while (!stack.empty()) {
      const int c = stack.back();
      stack.pop_back();
      er.cells.push_back(c);
      const int cx = c % dim, cy = c / dim;
      er.cx0 = std::min(er.cx0, cx);
      er.cx1 = std::max(er.cx1, cx);
      er.cy0 = std::min(er.cy0, cy);
      er.cy1 = std::max(er.cy1, cy);
      const int neigh[4] = {c - 1, c + 1, c - dim, c + dim};
      for (int k = 0; k < 4; ++k) {
        const int nb = neigh[k];
        if (nb < 0 || nb >= static_cast<int>(blocked_coarse.size())) continue;
        if ((k < 2) && nb / dim != cy) continue;
        if (blocked_coarse[nb] && comp[nb] < 0) {
          comp[nb] = comp[c];
          stack.push_back(nb);
        }
      }
    }
    std::sort(er.cells.begin(), er.cells.end());
    out.push_back(std::move(er));
  }
  return out;
}

}  // namespace

SchemeResult run_detoured_hybrid(const NetworkConfig& cfg, const NetworkInstance& inst) {
  cfg.validate();
  const double s = short_range_snr(cfg);
  const double m_raw = std::pow(s, 1.0 / (cfg.alpha / 2.0 - 1.0));
  const double m_min = 2.0 * std::log(cfg.n);

  if (m_raw <= m_min) {
    SchemeResult res = run_detoured_mh(cfg, inst);
    res.scheme = "hybrid";
    res.degenerate = true;
    res.M = 1.0;
    return res;
  }

  const ChannelModel ch = ChannelModel::from(cfg);
  const CellGrid grid = build_cell_grid(inst, cfg.n);
  const auto regions = build_regions(inst.wardens, cfg, grid);
  const auto cell_covered = raw_blocked_cells(regions, grid);
  // Node-level preservation uses the exact formula squares; snapping to the
  // one-cell floor would inflate the silenced-node set several-fold at these
  // densities.
  const auto node_preserved = nodes_in_formula_squares(inst.legit, inst.wardens, cfg, grid);
  const double d_floor = preservation_formula_width(cfg) / 2.0;

  const double M = std::min(m_raw, cfg.n / 4.0);
  const int coarse_dim =
      std::max(2, static_cast<int>(std::ceil(std::sqrt(cfg.n / M) - 1e-12)));
  const CellGrid coarse = build_grid_with_dim(inst.legit, coarse_dim, std::sqrt(M / cfg.n));

  SchemeResult res;
  res.scheme = "hybrid";
  res.n = cfg.n;
  res.n_l = inst.n_l;
  res.n_w = inst.n_w;
  res.pair_count = static_cast<int>(inst.pairs.size());
  res.M = M;

  // Surviving (non-preserved) nodes per coarse cell; a coarse cell with none
  // left, or fully covered by preservation cells, is an obstacle.
  std::vector<int> coarse_surv(coarse.num_cells(), 0);
  std::vector<int> fine_in_tile(coarse.num_cells(), 0), fine_covered(coarse.num_cells(), 0);
  for (int c = 0; c < grid.num_cells(); ++c) {
    const double x = (c % grid.dim + 0.5) * grid.side;
    const double y = (c / grid.dim + 0.5) * grid.side;
    const int t = coarse.index(coarse.cell_x(x), coarse.cell_x(y));
    ++fine_in_tile[t];
    if (cell_covered[c]) ++fine_covered[t];
  }
  for (int i = 0; i < inst.n_l; ++i)
    if (!node_preserved[i]) ++coarse_surv[coarse.cell_of(inst.legit[i])];
  std::vector<char> blocked_coarse(coarse.num_cells(), 0);
  for (int t = 0; t < coarse.num_cells(); ++t)
    blocked_coarse[t] =
        coarse_surv[t] == 0 || (fine_in_tile[t] > 0 && fine_covered[t] == fine_in_tile[t]);

  const ExpandedRegionSet coarse_obs_regions =
      coarse_regions_from_blocked(blocked_coarse, coarse_dim);
  const ObstacleSet obstacles =
      make_obstacles(coarse_obs_regions, coarse, preservation_formula_width(cfg));

  RoutePlan direct = build_direct_paths(inst, coarse);
  // Pairs with a preserved endpoint node cannot transmit at all.
  for (std::size_t i = 0; i < inst.pairs.size(); ++i)
    if (node_preserved[inst.pairs[i].first] || node_preserved[inst.pairs[i].second])
      direct.outage[i] = 1;
  RoutePlan plan = detour_paths(direct, obstacles, inst, coarse);
  res.max_detour_depth = plan.max_detour_depth;
  res.detour_depth_flag = plan.depth_flag;
  res.outage_frac = outage_fraction(plan, inst);

  const double c_hyb = hybrid_power_constant(cfg);
  const double cap = c_hyb * hc_nominal_cap(cfg, cfg.n);
  const double p_node = 9.0 * cap;  // 1/9 duty under the coarse 9-TDMA
  res.budget.p_hc_avg = cap;
  res.budget.mimo_scale = std::sqrt(M / cfg.n);

  // Antennas per hop: the typical loaded cell's surviving nodes take over
  // for silenced ones (uniform-rate model).
  long surv_sum = 0;
  int loaded_cells = 0;
  for (int t = 0; t < coarse.num_cells(); ++t)
    if (plan.load[t] > 0) {
      surv_sum += coarse_surv[t];
      ++loaded_cells;
    }
  const int m_surv = loaded_cells > 0 ? static_cast<int>(surv_sum / loaded_cells) : 0;

  // Per-stream SNR with MIMO array gain proportional to the surviving
  // antennas; interference from concurrently active coarse cells mirrors the
  // fine-grid ring bound at coarse granularity.
  const double d_hop = std::sqrt(5.0) * coarse.side;
  const double snr_stream = m_surv * p_node * ch.gain(d_hop) / cfg.N0;
  const double inr_stream = m_surv * p_node * cfg.G * std::pow(coarse.side, -cfg.alpha) / cfg.N0 *
                            inr_series(cfg.alpha, static_cast<double>(coarse.num_cells()));
  const double r_cellhop =
      m_surv > 0 ? m_surv * std::log1p(snr_stream / (1.0 + inr_stream)) / 9.0 : 0.0;
  const int load = max_cell_load(plan);
  res.max_load = load;
  res.rate_per_pair = load > 0 ? r_cellhop / load : 0.0;
  int alive = 0;
  for (char o : plan.outage) alive += o ? 0 : 1;
  res.outage_pairs = res.pair_count - alive;
  res.throughput = alive * res.rate_per_pair;

  // Covertness: coarse 9-TDMA stationary traces; every surviving node of an
  // active loaded cell transmits at p_node.
  const auto gains = warden_gain_table(inst.wardens, grid, ch, d_floor);
  std::vector<int> phase_of_tile(coarse.num_cells());
  for (int t = 0; t < coarse.num_cells(); ++t)
    phase_of_tile[t] = (t % coarse_dim) % 3 + 3 * ((t / coarse_dim) % 3);
  // Active transmitter count per fine cell, split by coarse 9-TDMA phase.
  std::vector<std::vector<double>> weight_by_phase(9,
                                                   std::vector<double>(grid.num_cells(), 0.0));
  for (int i = 0; i < inst.n_l; ++i) {
    if (node_preserved[i]) continue;
    const int t = coarse.cell_of(inst.legit[i]);
    if (plan.load[t] == 0) continue;
    weight_by_phase[phase_of_tile[t]][grid.cell_of(inst.legit[i])] += 1.0;
  }
  std::vector<std::vector<double>> traces(inst.wardens.size(), std::vector<double>(9, 0.0));
  for (std::size_t w = 0; w < inst.wardens.size(); ++w)
    for (int ph = 0; ph < 9; ++ph) {
      double sum = 0.0;
      const auto& weights = weight_by_phase[ph];
      for (int fc = 0; fc < grid.num_cells(); ++fc)
        if (weights[fc] > 0.0) sum += weights[fc] * gains[w][fc];
      traces[w][ph] = sum * p_node;
    }
  const CovertnessReport rep = kl_report(traces, cfg.resolved_l(), cfg.N0, cfg.delta);
  res.covert_pass = rep.pass;
  res.worst_kl = rep.worst_kl;
  res.worst_warden = rep.worst_warden;
  if (!rep.pass) covertness_failure("hybrid", cfg, rep);
  return res;
}

SchemeResult run_scheme(const std::string& name, const NetworkConfig& cfg,
                        const NetworkInstance& inst) {
  if (name == "mh") return run_detoured_mh(cfg, inst);
  if (name == "hc") return run_modified_hc(cfg, inst);
  if (name == "hybrid") return run_detoured_hybrid(cfg, inst);
  throw ConfigError("unknown scheme: " + name);
}

}  // namespace covertnet
