#include "covertnet/geometry.hpp"

namespace covertnet {

Vec2 Rect::nearest_corner(const Vec2& p) const {
  const double cx = std::fabs(p.x - lo.x) <= std::fabs(p.x - hi.x) ? lo.x : hi.x;
  const double cy = std::fabs(p.y - lo.y) <= std::fabs(p.y - hi.y) ? lo.y : hi.y;
  return {cx, cy};
}

Vec2 Rect::nearest_point(const Vec2& p) const {
  return {std::clamp(p.x, lo.x, hi.x), std::clamp(p.y, lo.y, hi.y)};
}

double rect_gap(const Rect& a, const Rect& b) {
  const double dx = std::max({b.lo.x - a.hi.x, a.lo.x - b.hi.x, 0.0});
  const double dy = std::max({b.lo.y - a.hi.y, a.lo.y - b.hi.y, 0.0});
  return std::hypot(dx, dy);
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  if (pts.size() < 3) return pts;
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return pts;

  std::vector<Vec2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Vec2> clip_polygon(const std::vector<Vec2>& poly, const Rect& r) {
  // Clip successively against the four half-planes of the rectangle.
  auto clip_edge = [](const std::vector<Vec2>& in, auto inside, auto intersect) {
    std::vector<Vec2> out;
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& cur = in[i];
      const Vec2& prev = in[(i + n - 1) % n];
      const bool ci = inside(cur), pi = inside(prev);
      if (ci) {
        if (!pi) out.push_back(intersect(prev, cur));
        out.push_back(cur);
      } else if (pi) {
        out.push_back(intersect(prev, cur));
      }
    }
    return out;
  };
  auto lerp_x = [](const Vec2& a, const Vec2& b, double x) {
    const double t = (x - a.x) / (b.x - a.x);
    return Vec2{x, a.y + t * (b.y - a.y)};
  };
  auto lerp_y = [](const Vec2& a, const Vec2& b, double y) {
    const double t = (y - a.y) / (b.y - a.y);
    return Vec2{a.x + t * (b.x - a.x), y};
  };

  std::vector<Vec2> p = poly;
  p = clip_edge(p, [&](const Vec2& v) { return v.x >= r.lo.x; },
                [&](const Vec2& a, const Vec2& b) { return lerp_x(a, b, r.lo.x); });
  if (p.empty()) return p;
  p = clip_edge(p, [&](const Vec2& v) { return v.x <= r.hi.x; },
                [&](const Vec2& a, const Vec2& b) { return lerp_x(a, b, r.hi.x); });
  if (p.empty()) return p;
  p = clip_edge(p, [&](const Vec2& v) { return v.y >= r.lo.y; },
                [&](const Vec2& a, const Vec2& b) { return lerp_y(a, b, r.lo.y); });
  if (p.empty()) return p;
  p = clip_edge(p, [&](const Vec2& v) { return v.y <= r.hi.y; },
                [&](const Vec2& a, const Vec2& b) { return lerp_y(a, b, r.hi.y); });
  return p;
}

double polygon_area(const std::vector<Vec2>& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

}  // namespace covertnet
