#include "covertnet/route.hpp"

#include <cmath>
#include <unordered_map>

namespace covertnet {

namespace {

constexpr int kDepthFlagAt = 10;
constexpr int kDepthHardCap = 32;
constexpr long kWorkBudget = 1500;  // per-pair step budget before the BFS fallback

struct Cell {
  int x;
  int y;
};

class Router {
 public:
  Router(const ObstacleSet& obs, RoutePlan& plan) : obs_(obs), plan_(plan) {}

  // Horizontal leg first, then vertical (the canonical data-path order).
  bool connect(Cell a, Cell b, std::vector<int>& out) {
    work_ = 0;
    out.clear();
    out.push_back(idx(a));
    if (a.x == b.x && a.y == b.y) return true;
    const Cell corner{b.x, a.y};
    if (!blocked(corner)) {
      if (segment(a, corner, 0, out) && segment(corner, b, 0, out)) {
        erase_loops(out);
        return true;
      }
      return false;
    }
    // The L-corner sits inside an expanded region: shift the turning column
    // to a bypass column of that region, chosen by the usual offset rule.
    const ExpandedRegion& r = region_at(corner);
    for (int xd : bypass_columns(b.x, r)) {
      if (xd < 0 || xd >= obs_.dim) continue;
      const Cell m1{xd, a.y}, m2{xd, b.y};
      if (blocked(m1) || blocked(m2)) continue;
      std::vector<int> attempt{idx(a)};
      if (segment(a, m1, 0, attempt) && segment(m1, m2, 0, attempt) &&
          segment(m2, b, 0, attempt)) {
        out = std::move(attempt);
        erase_loops(out);
        return true;
      }
    }
    return false;
  }

  // Vertical-first orientation, tried when the canonical one is boxed in.
  bool connect_transposed(Cell a, Cell b, std::vector<int>& out) {
    work_ = 0;
    out.clear();
    out.push_back(idx(a));
    if (a.x == b.x && a.y == b.y) return true;
    const Cell corner{a.x, b.y};
    if (!blocked(corner)) {
      if (segment(a, corner, 0, out) && segment(corner, b, 0, out)) {
        erase_loops(out);
        return true;
      }
      return false;
    }
    const ExpandedRegion& r = region_at(corner);
    for (int yd : bypass_rows(b.y, r)) {
      if (yd < 0 || yd >= obs_.dim) continue;
      const Cell m1{a.x, yd}, m2{b.x, yd};
      if (blocked(m1) || blocked(m2)) continue;
      std::vector<int> attempt{idx(a)};
      if (segment(a, m1, 0, attempt) && segment(m1, m2, 0, attempt) &&
          segment(m2, b, 0, attempt)) {
        out = std::move(attempt);
        erase_loops(out);
        return true;
      }
    }
    return false;
  }

 private:
  int idx(Cell c) const { return c.y * obs_.dim + c.x; }
  bool blocked(Cell c) const { return obs_.blocked(idx(c)); }
  const ExpandedRegion& region_at(Cell c) const { return obs_.regions[obs_.region_of[idx(c)]]; }

  void note_depth(int depth) {
    plan_.max_detour_depth = std::max(plan_.max_detour_depth, depth);
    if (depth > kDepthFlagAt) plan_.depth_flag = true;
  }

  // Cut cycles out of a finished path: recursive bypasses can backtrack over
  // cells they already relayed through, which would double-count load.
  static void erase_loops(std::vector<int>& path) {
    std::unordered_map<int, std::size_t> last_pos;
    std::vector<int> clean;
    clean.reserve(path.size());
    for (int c : path) {
      auto it = last_pos.find(c);
      if (it != last_pos.end()) {
        for (std::size_t k = it->second + 1; k < clean.size(); ++k) last_pos.erase(clean[k]);
        clean.resize(it->second + 1);
      } else {
        clean.push_back(c);
        last_pos[c] = clean.size() - 1;
      }
    }
    path = std::move(clean);
  }

  // Offset from the region border in cells: (L1 mod b)/2 quantized up, where
  // L1 is the distance from the path line to the farthest parallel edge.
  int offset_cells(double line, double edge_lo, double edge_hi) const {
    const double l1 = std::max(line - edge_lo, edge_hi - line);
    const double off = std::fmod(l1, obs_.b) / 2.0;
    return static_cast<int>(std::ceil(off / obs_.side - 1e-9));
  }

  // Candidate bypass columns for a vertical line at column x: the prescribed
  // offset on the side opposite the farthest parallel edge first, then the
  // other side, sliding outward one cell at a time when a candidate lane is
  // itself inside some region.
  std::vector<int> bypass_columns(int x, const ExpandedRegion& r) const {
    const double line = (x + 0.5) * obs_.side;
    const double x_lo = r.cx0 * obs_.side, x_hi = (r.cx1 + 1) * obs_.side;
    const int off = offset_cells(line, x_lo, x_hi);
    const bool near_left = line - x_lo <= x_hi - line;
    std::vector<int> out;
    for (int extra = 0; extra < 4; ++extra) {
      const int left = r.cx0 - 1 - off - extra;
      const int right = r.cx1 + 1 + off + extra;
      out.push_back(near_left ? left : right);
      out.push_back(near_left ? right : left);
    }
    return out;
  }

  std::vector<int> bypass_rows(int y, const ExpandedRegion& r) const {
    const double line = (y + 0.5) * obs_.side;
    const double y_lo = r.cy0 * obs_.side, y_hi = (r.cy1 + 1) * obs_.side;
    const int off = offset_cells(line, y_lo, y_hi);
    const bool near_below = line - y_lo <= y_hi - line;
    std::vector<int> out;
    for (int extra = 0; extra < 4; ++extra) {
      const int below = r.cy0 - 1 - off - extra;
      const int above = r.cy1 + 1 + off + extra;
      out.push_back(near_below ? below : above);
      out.push_back(near_below ? above : below);
    }
    return out;
  }

  // Walk an axis-aligned segment from a to b, appending every cell after a.
  // Blocked cells trigger a rectilinear bypass around the offending region,
  // re-applying the rule per crossing. Returns false when no feasible route
  // exists within the recursion cap.
  bool segment(Cell a, Cell b, int depth, std::vector<int>& out) {
    if (depth > kDepthHardCap || work_ > kWorkBudget) return false;
    if (blocked(b)) return false;
    Cell cur = a;
    while (cur.x != b.x || cur.y != b.y) {
      ++work_;
      Cell next = cur;
      if (cur.x != b.x)
        next.x += (b.x > cur.x) ? 1 : -1;
      else
        next.y += (b.y > cur.y) ? 1 : -1;
      if (!blocked(next)) {
        out.push_back(idx(next));
        cur = next;
        continue;
      }
      note_depth(depth + 1);
      Cell resume;
      if (!bypass(cur, b, next, depth, out, resume)) return false;
      cur = resume;
    }
    return true;
  }

  // Route around the region containing `hit`, resuming on the original line
  // at the first free cell past the blocked run (or at the endpoint when it
  // lies closer). The offset rule keys off the first offending region.
  bool bypass(Cell cur, Cell b, Cell hit, int depth, std::vector<int>& out, Cell& resume) {
    const ExpandedRegion& r = region_at(hit);
    const bool vertical = (cur.x == b.x);
    const auto saved_size = out.size();
    if (vertical) {
      const int dir = (b.y > cur.y) ? 1 : -1;
      int ey = hit.y;
      while (ey != b.y && blocked(Cell{cur.x, ey})) ey += dir;
      for (int xd : bypass_columns(cur.x, r)) {
        if (xd < 0 || xd >= obs_.dim) continue;
        const Cell m1{xd, cur.y}, m2{xd, ey}, m3{cur.x, ey};
        if (blocked(m1) || blocked(m2) || blocked(m3)) continue;
        if (segment(cur, m1, depth + 1, out) && segment(m1, m2, depth + 1, out) &&
            segment(m2, m3, depth + 1, out)) {
          resume = m3;
          return true;
        }
        out.resize(saved_size);
      }
    } else {
      const int dir = (b.x > cur.x) ? 1 : -1;
      int ex = hit.x;
      while (ex != b.x && blocked(Cell{ex, cur.y})) ex += dir;
      for (int yd : bypass_rows(cur.y, r)) {
        if (yd < 0 || yd >= obs_.dim) continue;
        const Cell m1{cur.x, yd}, m2{ex, yd}, m3{ex, cur.y};
        if (blocked(m1) || blocked(m2) || blocked(m3)) continue;
        if (segment(cur, m1, depth + 1, out) && segment(m1, m2, depth + 1, out) &&
            segment(m2, m3, depth + 1, out)) {
          resume = m3;
          return true;
        }
        out.resize(saved_size);
      }
    }
    return false;
  }

  const ObstacleSet& obs_;
  RoutePlan& plan_;
  long work_ = 0;
};

void recompute_load(RoutePlan& plan) {
  plan.load.assign(static_cast<std::size_t>(plan.dim) * plan.dim, 0);
  for (const auto& path : plan.paths)
    for (int c : path) ++plan.load[c];
}

// Feasibility rescue: plain breadth-first search over unblocked cells.
bool bfs_route(const ObstacleSet& obs, int from, int to, std::vector<int>& out) {
  const int cells = obs.dim * obs.dim;
  std::vector<int> prev(cells, -2);
  std::vector<int> queue;
  queue.reserve(256);
  queue.push_back(from);
  prev[from] = -1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int c = queue[head];
    if (c == to) break;
    const int cx = c % obs.dim, cy = c / obs.dim;
    const int neigh[4] = {cx > 0 ? c - 1 : -1, cx + 1 < obs.dim ? c + 1 : -1,
                          cy > 0 ? c - obs.dim : -1, cy + 1 < obs.dim ? c + obs.dim : -1};
    for (int nb : neigh) {
      if (nb < 0 || prev[nb] != -2 || obs.blocked(nb)) continue;
      prev[nb] = c;
      queue.push_back(nb);
    }
  }
  if (prev[to] == -2) return false;
  out.clear();
  for (int c = to; c != -1; c = prev[c]) out.push_back(c);
  std::reverse(out.begin(), out.end());
  return true;
}

}  // namespace

ObstacleSet make_obstacles(const ExpandedRegionSet& expanded, const CellGrid& grid, double b) {
  ObstacleSet obs;
  obs.dim = grid.dim;
  obs.side = grid.side;
  obs.b = b;
  obs.regions = expanded;
  obs.region_of.assign(static_cast<std::size_t>(grid.dim) * grid.dim, -1);
  for (int i = 0; i < static_cast<int>(expanded.size()); ++i)
    for (int c : expanded[i].cells)
      if (obs.region_of[c] < 0) obs.region_of[c] = i;
  return obs;
}

RoutePlan build_direct_paths(const NetworkInstance& inst, const CellGrid& grid) {
  RoutePlan plan;
  plan.dim = grid.dim;
  plan.paths.resize(inst.pairs.size());
  plan.outage.assign(inst.pairs.size(), 0);
  for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
    const Vec2& s = inst.legit[inst.pairs[i].first];
    const Vec2& d = inst.legit[inst.pairs[i].second];
    const int sx = grid.cell_x(s.x), sy = grid.cell_x(s.y);
    const int dx = grid.cell_x(d.x), dy = grid.cell_x(d.y);
    auto& path = plan.paths[i];
    path.push_back(grid.index(sx, sy));
    for (int x = sx; x != dx;) {
      x += (dx > sx) ? 1 : -1;
      path.push_back(grid.index(x, sy));
    }
    for (int y = sy; y != dy;) {
      y += (dy > sy) ? 1 : -1;
      path.push_back(grid.index(dx, y));
    }
  }
  recompute_load(plan);
  return plan;
}

RoutePlan detour_paths(const RoutePlan& plan, const ObstacleSet& obstacles,
                       const NetworkInstance& inst, const CellGrid& grid) {
  RoutePlan out;
  out.dim = plan.dim;
  out.paths.resize(plan.paths.size());
  out.outage = plan.outage;
  if (obstacles.empty()) {
    out.paths = plan.paths;
    recompute_load(out);
    return out;
  }
  Router router(obstacles, out);
  // An endpoint whose cell is forbidden for relaying may still open or close
  // its path with one boundary hop into the nearest free cell; deeper inside
  // an expanded region there is no data path and the pair is in outage.
  auto exit_cell = [&](int c, int toward) -> int {
    if (!obstacles.blocked(c)) return c;
    const int cx = c % grid.dim, cy = c / grid.dim;
    const int tx = toward % grid.dim, ty = toward / grid.dim;
    int best = -1;
    double best_rank = 1e18;
    const int neigh[4] = {cx > 0 ? c - 1 : -1, cx + 1 < grid.dim ? c + 1 : -1,
                          cy > 0 ? c - grid.dim : -1, cy + 1 < grid.dim ? c + grid.dim : -1};
    for (int nb : neigh) {
      if (nb < 0 || obstacles.blocked(nb)) continue;
      const double rank = std::hypot(double(nb % grid.dim - tx), double(nb / grid.dim - ty));
      if (rank < best_rank) {
        best_rank = rank;
        best = nb;
      }
    }
    return best;
  };
  for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
    if (plan.outage[i]) continue;
    const Vec2& s = inst.legit[inst.pairs[i].first];
    const Vec2& d = inst.legit[inst.pairs[i].second];
    const int sc = grid.cell_of(s), dc = grid.cell_of(d);
    if (sc == dc) {
      out.paths[i] = {sc};
      continue;
    }
    const int sx = exit_cell(sc, dc), dx = exit_cell(dc, sc);
    if (sx < 0 || dx < 0) {
      out.outage[i] = 1;
      continue;
    }
    Cell a{sx % grid.dim, sx / grid.dim};
    Cell b{dx % grid.dim, dx / grid.dim};
    auto& path = out.paths[i];
    // Offset-spread detours first (both L orientations); a pair is in outage
    // only when no data path exists at all.
    if (!router.connect(a, b, path) && !router.connect_transposed(a, b, path) &&
        !bfs_route(obstacles, sx, dx, path)) {
      path.clear();
      out.outage[i] = 1;
      continue;
    }
    if (sx != sc) path.insert(path.begin(), sc);
    if (dx != dc) path.push_back(dc);
  }
  recompute_load(out);
  return out;
}

int max_cell_load(const RoutePlan& plan) {
  int m = 0;
  for (int v : plan.load) m = std::max(m, v);
  return m;
}

double outage_fraction(const RoutePlan& plan, const NetworkInstance& inst) {
  if (inst.n_l == 0) return 0.0;
  int affected = inst.unpaired ? 1 : 0;
  for (char o : plan.outage) affected += o ? 2 : 0;
  return static_cast<double>(affected) / inst.n_l;
}

}  // namespace covertnet
