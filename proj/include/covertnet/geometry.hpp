#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace covertnet {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }

inline double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double dist(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Axis-aligned rectangle, lo <= hi componentwise.
struct Rect {
  Vec2 lo;
  Vec2 hi;

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double area() const { return width() * height(); }

  bool contains(const Vec2& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }

  Vec2 nearest_corner(const Vec2& p) const;
  Vec2 nearest_point(const Vec2& p) const;
};

/// Shortest L2 distance between two axis-aligned rectangles (0 if they
/// overlap or touch).
double rect_gap(const Rect& a, const Rect& b);

/// Convex hull by monotone chain, counter-clockwise, no repeated endpoint.
/// Collinear inputs collapse to the two extreme points.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

/// Clip a convex polygon against a rectangle (Sutherland-Hodgman).
std::vector<Vec2> clip_polygon(const std::vector<Vec2>& poly, const Rect& r);

/// Signed area of a polygon (positive when counter-clockwise).
double polygon_area(const std::vector<Vec2>& poly);

}  // namespace covertnet
