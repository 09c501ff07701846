#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "mcl/errors.hpp"

namespace mcl {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr Point operator/(Point a, double s) noexcept { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Point a, Point b) noexcept = default;
};

constexpr double dot(Point a, Point b) noexcept { return a.x * b.x + a.y * b.y; }
// z-component of the 3-D cross product of (a,0) and (b,0).
constexpr double cross(Point a, Point b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) noexcept { return std::hypot(a.x, a.y); }
constexpr double norm2(Point a) noexcept { return dot(a, a); }
inline double dist(Point a, Point b) noexcept { return norm(a - b); }
constexpr Point perp(Point a) noexcept { return {-a.y, a.x}; }
inline Point normalized(Point a) noexcept {
  const double n = norm(a);
  return n > 0.0 ? a / n : a;
}
inline bool is_finite(Point a) noexcept { return std::isfinite(a.x) && std::isfinite(a.y); }

// Strict weak order used for every deterministic tie-break in the library.
constexpr bool lex_less(Point a, Point b) noexcept {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

struct BoundingBox {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;

  BoundingBox() = default;
  BoundingBox(double x0, double x1, double y0, double y1) : xmin(x0), xmax(x1), ymin(y0), ymax(y1) {
    if (!(xmin < xmax) || !(ymin < ymax)) throw ConfigError("bounding box needs xmin < xmax and ymin < ymax");
  }

  double width() const noexcept { return xmax - xmin; }
  double height() const noexcept { return ymax - ymin; }
  double diagonal() const noexcept { return std::hypot(width(), height()); }
  Point center() const noexcept { return {(xmin + xmax) / 2, (ymin + ymax) / 2}; }
  bool contains(Point p) const noexcept {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  BoundingBox inflated(double margin) const { return {xmin - margin, xmax + margin, ymin - margin, ymax + margin}; }

  static BoundingBox of(std::span<const Point> pts) {
    if (pts.empty()) throw EmptySet("bounding box of an empty point set");
    double x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
    for (const Point& p : pts) {
      x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
    }
    // Degenerate extents are padded so the box invariant holds.
    const double pad = 1e-12 * (1.0 + std::max(std::abs(x1 - x0), std::abs(y1 - y0)));
    if (x1 - x0 <= 0) x0 -= pad, x1 += pad;
    if (y1 - y0 <= 0) y0 -= pad, y1 += pad;
    return {x0, x1, y0, y1};
  }
};

inline double point_segment_distance(Point p, Point a, Point b) noexcept {
  const Point ab = b - a;
  const double len2 = norm2(ab);
  if (len2 == 0.0) return dist(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist(p, a + t * ab);
}

inline double point_ray_distance(Point p, Point origin, Point dir) noexcept {
  const double len2 = norm2(dir);
  if (len2 == 0.0) return dist(p, origin);
  const double t = std::max(0.0, dot(p - origin, dir) / len2);
  return dist(p, origin + t * dir);
}

inline double point_line_distance(Point p, Point origin, Point dir) noexcept {
  const double n = norm(dir);
  if (n == 0.0) return dist(p, origin);
  return std::abs(cross(dir, p - origin)) / n;
}

// Parameter t >= 0 where origin + t*dir leaves box, or -1 if the ray misses it.
inline double ray_exit_parameter(Point origin, Point dir, const BoundingBox& box) noexcept {
  double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
  const double o[2] = {origin.x, origin.y}, d[2] = {dir.x, dir.y};
  const double lo[2] = {box.xmin, box.ymin}, hi[2] = {box.xmax, box.ymax};
  for (int k = 0; k < 2; ++k) {
    if (d[k] == 0.0) {
      if (o[k] < lo[k] || o[k] > hi[k]) return -1.0;
      continue;
    }
    double ta = (lo[k] - o[k]) / d[k], tb = (hi[k] - o[k]) / d[k];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  return t0 <= t1 ? t1 : -1.0;
}

// Liang-Barsky clip of segment [a,b]; returns false when nothing remains.
inline bool clip_segment(Point& a, Point& b, const BoundingBox& box) noexcept {
  const Point d = b - a;
  double t0 = 0.0, t1 = 1.0;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {a.x - box.xmin, box.xmax - a.x, a.y - box.ymin, box.ymax - a.y};
  for (int k = 0; k < 4; ++k) {
    if (p[k] == 0.0) {
      if (q[k] < 0.0) return false;
      continue;
    }
    const double r = q[k] / p[k];
    if (p[k] < 0.0) t0 = std::max(t0, r);
    else t1 = std::min(t1, r);
  }
  if (t0 > t1) return false;
  const Point a0 = a;
  a = a0 + t0 * d;
  b = a0 + t1 * d;
  return true;
}

}  // namespace mcl
