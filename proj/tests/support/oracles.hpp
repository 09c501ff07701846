#pragma once

// Brute-force reference implementations used by several test binaries.

#include <gmpxx.h>

#include <limits>
#include <random>
#include <vector>

#include "mcl/curve.hpp"
#include "mcl/geometry.hpp"

namespace oracle {

using mcl::Point;

// Exact test: is d strictly inside the circle through a, b, c (any orientation)?
inline bool strictly_inside_circumcircle(Point a, Point b, Point c, Point d) {
  // Solve for the center exactly, then compare squared distances.
  const mpq_class ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y), dx(d.x), dy(d.y);
  const mpq_class b1 = bx - ax, b2 = by - ay, c1 = cx - ax, c2 = cy - ay;
  const mpq_class den = 2 * (b1 * c2 - b2 * c1);
  const mpq_class bb = b1 * b1 + b2 * b2, cc = c1 * c1 + c2 * c2;
  const mpq_class ux = (c2 * bb - b2 * cc) / den, uy = (b1 * cc - c1 * bb) / den;
  const mpq_class r2 = ux * ux + uy * uy;
  const mpq_class ex = dx - ax - ux, ey = dy - ay - uy;
  return ex * ex + ey * ey < r2;
}

inline int nearest_site(const std::vector<Point>& sites, Point p) {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const double d = mcl::norm2(p - sites[i]);
    if (d < bd) bd = d, best = static_cast<int>(i);
  }
  return best;
}

inline std::vector<Point> random_points(int n, unsigned seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point> out;
  for (int i = 0; i < n; ++i) out.push_back({u(rng), u(rng)});
  return out;
}

// Fixed-step tangent march with gradient projection; follows one closed
// smooth component from a seed and stops once back at the start.
inline std::vector<Point> dense_loop(const mcl::Curve& c, Point seed, double h, std::size_t max_steps = 2000000) {
  auto project = [&](Point q) {
    for (int i = 0; i < 30; ++i) {
      const Point g = c.gradient(q);
      const double step = c.value(q) / mcl::norm2(g);
      q = q - step * g;
      if (std::abs(step) < 1e-17) break;
    }
    return q;
  };
  std::vector<Point> out{project(seed)};
  Point dir = mcl::normalized(mcl::perp(c.gradient(out[0])));
  for (std::size_t k = 0; k < max_steps; ++k) {
    const Point p = out.back();
    Point t = mcl::normalized(mcl::perp(c.gradient(p)));
    if (mcl::dot(t, dir) < 0) t = -1.0 * t;
    dir = t;
    const Point q = project(p + h * t);
    if (out.size() > 10 && mcl::dist(q, out[0]) < 0.75 * h) break;
    out.push_back(q);
  }
  return out;
}

// A point of V(F) on the segment [a, b] found by bisection; F(a), F(b) must differ in sign.
inline Point bisect_on_segment(const mcl::Curve& c, Point a, Point b) {
  const bool sa = c.value(a) > 0;
  for (int i = 0; i < 200; ++i) {
    const Point m = (a + b) / 2.0;
    if ((c.value(m) > 0) == sa) a = m;
    else b = m;
  }
  return (a + b) / 2.0;
}

}  // namespace oracle
