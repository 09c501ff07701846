#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mcl/curve.hpp"
#include "mcl/errors.hpp"
#include "mcl/features.hpp"
#include "mcl/newton.hpp"
#include "mcl/parallel.hpp"
#include "mcl/sampler.hpp"

namespace mcl {

struct CriticalPoint {
  Point p;
  double radius = 0.0;     // |radius of curvature|, +inf at a flat point
  double curvature = 0.0;  // 1 / radius
  double residual_f = 0.0;  // |F(p)|
  double residual_g = 0.0;  // |G(p)|
};

struct CriticalCurvatureResult {
  std::vector<CriticalPoint> points;  // sorted lexicographically
  double q = std::numeric_limits<double>::infinity();  // min radius of curvature
  double max_curvature = 0.0;
  // Every point of the curve is critical (constant curvature: lines, circles).
  bool constant_curvature = false;
  bool stable = true;   // the count agreed between the last two sample densities
  double epsilon = 0.0;  // density of the sample the result came from
  int degree_bound = 0;  // 6d^2 - 10d
  std::vector<std::string> warnings;
};

struct BottleneckPair {
  Point x, y;  // x lexicographically before y
  double width = 0.0;
  double residual_norm = 0.0;  // max |bottleneck_residual|
};

struct BottleneckResult {
  std::vector<BottleneckPair> pairs;  // isolated solutions, sorted by width
  // One representative per continuous family of solutions (e.g. all diameters
  // of a circle), detected by a rank-deficient Jacobian at the solution.
  std::vector<BottleneckPair> families;
  double rho = std::numeric_limits<double>::infinity();  // narrowest width over pairs and families
  std::size_t degree_bound = 0;  // (d^4 - 5d^2 + 4d) / 2 unordered pairs
  // Most scan seeds are not near any solution, so unconverged seeds are counted, not warned about.
  std::size_t seeds = 0, converged_seeds = 0;
  std::vector<std::string> warnings;

  bool degenerate_family() const noexcept { return !families.empty(); }
};

struct SolverOptions {
  double dedupe_rel = 1e-6;  // times the sample box diagonal
  double newton_tol = 1e-10;  // on row-scaled residuals
  int stability_retries = 3;
  double family_rank_tol = 1e-8;  // smallest/largest singular value of the scaled Jacobian
};

namespace detail {

// Residual rows of F = 0, G = 0 scaled by the magnitude of their terms. G is
// scaled at unit-padded coordinates: for a monomial such as xy the plain
// term magnitude equals |G| and the scaled row would be identically 1.
inline NewtonSystem critical_system(const Curve& c, const Poly2d& g, const Poly2d& gx, const Poly2d& gy) {
  return [&c, &g, &gx, &gy](const Eigen::VectorXd& v, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
    const Point p{v(0), v(1)};
    const double sf = std::max(c.scale(p), 1e-300), sg = std::max(g.abs_eval(1 + std::abs(p.x), 1 + std::abs(p.y)), 1e-300);
    r.resize(2);
    r(0) = c.value(p) / sf;
    r(1) = g.eval(p.x, p.y) / sg;
    if (J) {
      const Point grad = c.gradient(p);
      J->resize(2, 2);
      (*J) << grad.x / sf, grad.y / sf, gx.eval(p.x, p.y) / sg, gy.eval(p.x, p.y) / sg;
    }
  };
}

inline void dedupe_points(std::vector<CriticalPoint>& pts, double tol) {
  std::vector<CriticalPoint> out;
  for (const CriticalPoint& cp : pts) {
    bool dup = false;
    for (const CriticalPoint& o : out) dup = dup || dist(cp.p, o.p) <= tol;
    if (!dup) out.push_back(cp);
  }
  std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) { return lex_less(a.p, b.p); });
  pts = std::move(out);
}

// Refines seeds on the zero set of g along the curve; returns deduplicated points.
inline std::vector<CriticalPoint> refine_critical_seeds(const Curve& c, const Poly2d& g, const std::vector<Point>& seeds,
                                                        double dedupe_tol, const SolverOptions& opt,
                                                        std::vector<std::string>& warnings) {
  const Poly2d gx = g.diff(Var::X), gy = g.diff(Var::Y);
  const NewtonSystem sys = critical_system(c, g, gx, gy);
  std::vector<std::optional<CriticalPoint>> slots(seeds.size());
  std::vector<std::string> fail(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    NewtonOptions no;
    no.tol = 1e-14;
    const NewtonResult res = newton_solve(sys, Eigen::Vector2d(seeds[i].x, seeds[i].y), no);
    if (!(res.residual < opt.newton_tol)) {
      fail[i] = "critical-curvature seed (" + std::to_string(seeds[i].x) + ", " + std::to_string(seeds[i].y) +
                ") dropped: residual " + std::to_string(res.residual);
      return;
    }
    CriticalPoint cp;
    cp.p = {res.x(0), res.x(1)};
    cp.residual_f = std::abs(c.value(cp.p));
    cp.residual_g = std::abs(g.eval(cp.p.x, cp.p.y));
    const CurvatureData cd = curvature(c, cp.p);
    cp.radius = std::abs(cd.radius_signed);
    cp.curvature = cd.curvature;
    slots[i] = cp;
  });
  std::vector<CriticalPoint> pts;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (slots[i]) pts.push_back(*slots[i]);
    else if (!fail[i].empty()) warnings.push_back(fail[i]);
  }
  dedupe_points(pts, dedupe_tol);
  return pts;
}

template <typename F>
void for_each_gap(const Sample& A, F&& f) {
  for (const Component& comp : A.components) {
    const std::size_t m = comp.points.size();
    if (m < 2) continue;
    const std::size_t gaps = comp.closed ? m : m - 1;
    for (std::size_t k = 0; k < gaps; ++k) f(comp.points[k], comp.points[(k + 1) % m]);
  }
}

// Seeds where g changes sign between consecutive sample points.
inline std::vector<Point> sign_change_seeds(const Poly2d& g, const Sample& A) {
  std::vector<Point> seeds;
  for_each_gap(A, [&](Point a, Point b) {
    const double ga = g.eval(a.x, a.y), gb = g.eval(b.x, b.y);
    if (ga == 0.0) seeds.push_back(a);
    else if ((ga < 0) != (gb < 0) && gb != 0.0) seeds.push_back(a + (ga / (ga - gb)) * (b - a));
  });
  return seeds;
}

// Seeds at discrete local extrema of the curvature along each component.
inline std::vector<Point> curvature_extremum_seeds(const Curve& c, const Sample& A) {
  std::vector<Point> seeds;
  for (const Component& comp : A.components) {
    const std::size_t m = comp.points.size();
    if (m < 3) continue;
    std::vector<double> k(m);
    for (std::size_t i = 0; i < m; ++i) k[i] = curvature(c, comp.points[i]).curvature;
    const std::size_t lo = comp.closed ? 0 : 1, hi = comp.closed ? m : m - 1;
    for (std::size_t i = lo; i < hi; ++i) {
      const double a = k[(i + m - 1) % m], b = k[i], d = k[(i + 1) % m];
      if ((b > a && b >= d) || (b < a && b <= d)) seeds.push_back(comp.points[i]);
    }
  }
  return seeds;
}

inline CriticalCurvatureResult critical_points_with(const Curve& c, const Poly2d& g, const Sample& A, bool conic,
                                                    const SolverOptions& opt) {
  CriticalCurvatureResult res;
  res.epsilon = A.epsilon;
  const double tol = opt.dedupe_rel * A.box.diagonal();
  const std::vector<Point> seeds = conic ? curvature_extremum_seeds(c, A) : sign_change_seeds(g, A);
  res.points = refine_critical_seeds(c, g, seeds, tol, opt, res.warnings);
  for (const CriticalPoint& cp : res.points) {
    res.q = std::min(res.q, cp.radius);
    res.max_curvature = std::max(res.max_curvature, cp.curvature);
  }
  return res;
}

inline Poly2d critical_poly_double(const Curve& c, bool any_degree) {
  const RatPoly2 f = c.exact() ? *c.exact() : c.poly().cast<Rational>();
  return (any_degree ? critical_curvature_poly_any_degree(f) : critical_curvature_poly(f)).cast<double>();
}

inline CriticalCurvatureResult stabilized(const Curve& c, const Poly2d& g, const Sample& A, bool conic,
                                          const SolverOptions& opt) {
  CriticalCurvatureResult res = critical_points_with(c, g, A, conic, opt);
  double eps = A.epsilon;
  res.stable = false;
  for (int k = 0; k < opt.stability_retries; ++k) {
    eps /= 2;
    const Sample finer = epsilon_sample(c, A.box, eps, A.singular_points);
    CriticalCurvatureResult next = critical_points_with(c, g, finer, conic, opt);
    const bool same = next.points.size() == res.points.size();
    next.warnings.insert(next.warnings.begin(), res.warnings.begin(), res.warnings.end());
    if (same) {
      res.stable = true;
      res.warnings = std::move(next.warnings);
      break;
    }
    res = std::move(next);
  }
  if (!res.stable) res.warnings.push_back("critical-curvature count still changing after " +
                                          std::to_string(opt.stability_retries) + " refinements");
  return res;
}

}  // namespace detail

/// Real points of critical curvature on the traced components of A, for degree >= 3.
inline CriticalCurvatureResult real_critical_curvature(const Curve& c, const Sample& A, const SolverOptions& opt = {}) {
  const Poly2d g = detail::critical_poly_double(c, false);  // throws DegreeError below degree 3
  CriticalCurvatureResult res = detail::stabilized(c, g, A, false, opt);
  const int d = c.degree();
  res.degree_bound = 6 * d * d - 10 * d;
  if (static_cast<int>(res.points.size()) > res.degree_bound)
    res.warnings.push_back("critical-curvature count exceeds the degree bound");
  return res;
}

/// Curvature extrema for any degree. Conics use a search for discrete extrema
/// of the curvature along the trace refined on F = G = 0; curves of constant
/// curvature report that instead of points.
inline CriticalCurvatureResult curvature_extrema(const Curve& c, const Sample& A, const SolverOptions& opt = {}) {
  if (c.degree() >= 3) return real_critical_curvature(c, A, opt);
  const Poly2d g = detail::critical_poly_double(c, true);
  if (g.is_zero()) {
    CriticalCurvatureResult res;
    res.epsilon = A.epsilon;
    res.constant_curvature = true;
    if (!A.all_points.empty()) {
      const CurvatureData cd = curvature(c, A.all_points.front());
      res.q = std::abs(cd.radius_signed);
      res.max_curvature = cd.curvature;
    }
    return res;
  }
  return detail::stabilized(c, g, A, true, opt);
}

namespace detail {

inline NewtonSystem bottleneck_system(const Curve& c) {
  return [&c](const Eigen::VectorXd& v, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
    const Point x{v(0), v(1)}, y{v(2), v(3)};
    const Jet2 jx = c.jet(x), jy = c.jet(y);
    const Point d = y - x;
    const double len = std::max(norm(d), 1e-300);
    const double s1 = std::max(c.scale(x), 1e-300), s2 = std::max(c.scale(y), 1e-300);
    const double s3 = std::max(len * c.gradient_scale(x), 1e-300), s4 = std::max(len * c.gradient_scale(y), 1e-300);
    r.resize(4);
    r(0) = jx.f / s1;
    r(1) = jy.f / s2;
    r(2) = (d.x * jx.fy - d.y * jx.fx) / s3;
    r(3) = (-d.x * jy.fy + d.y * jy.fx) / s4;
    if (J) {
      J->setZero(4, 4);
      (*J)(0, 0) = jx.fx / s1, (*J)(0, 1) = jx.fy / s1;
      (*J)(1, 2) = jy.fx / s2, (*J)(1, 3) = jy.fy / s2;
      // (y - x) x grad F(x)
      (*J)(2, 0) = (-jx.fy + d.x * jx.fxy - d.y * jx.fxx) / s3;
      (*J)(2, 1) = (d.x * jx.fyy + jx.fx - d.y * jx.fxy) / s3;
      (*J)(2, 2) = jx.fy / s3;
      (*J)(2, 3) = -jx.fx / s3;
      // (x - y) x grad F(y), the same with the roles swapped
      (*J)(3, 2) = (-jy.fy - d.x * jy.fxy + d.y * jy.fxx) / s4;
      (*J)(3, 3) = (-d.x * jy.fyy + jy.fx + d.y * jy.fxy) / s4;
      (*J)(3, 0) = jy.fy / s4;
      (*J)(3, 1) = -jy.fx / s4;
    }
  };
}

// Pairs (s_i, y) where the normal line at sample point s_i crosses the curve
// between consecutive sample points and is roughly normal there too.
inline std::vector<std::pair<Point, Point>> alignment_seeds(const Curve& c, const Sample& A, double max_sine = 0.9) {
  std::vector<std::pair<Point, Point>> gaps;
  for_each_gap(A, [&](Point a, Point b) { gaps.emplace_back(a, b); });
  const std::vector<Point>& pts = A.all_points;
  std::vector<std::vector<std::pair<Point, Point>>> slots(pts.size());
  const double min_sep = 2 * A.epsilon;
  parallel_for(pts.size(), [&](std::size_t i) {
    const Point s = pts[i];
    const Point n = c.gradient(s);
    if (norm(n) == 0.0) return;
    for (const auto& [a, b] : gaps) {
      const double ga = cross(a - s, n), gb = cross(b - s, n);
      if ((ga < 0) == (gb < 0) || ga == gb) continue;
      const Point y = a + (ga / (ga - gb)) * (b - a);
      const double len = dist(s, y);
      if (len < min_sep) continue;
      const Point ny = c.gradient(y);
      const double sine = std::abs(cross(s - y, ny)) / (len * std::max(norm(ny), 1e-300));
      if (sine < max_sine) slots[i].emplace_back(s, y);
    }
  });
  std::vector<std::pair<Point, Point>> out;
  for (auto& v : slots) out.insert(out.end(), v.begin(), v.end());
  return out;
}

inline double smallest_singular_ratio(const Eigen::MatrixXd& J) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& s = svd.singularValues();
  return s(0) > 0 ? s(s.size() - 1) / s(0) : 0.0;
}

}  // namespace detail

/// Real bottleneck pairs seeded from an alignment scan over A (plus optional
/// candidate pairs), refined by Newton on the bottleneck system.
inline BottleneckResult real_bottlenecks(const Curve& c, const Sample& A,
                                         const std::vector<BottleneckCandidate>& candidates = {},
                                         const SolverOptions& opt = {}) {
  BottleneckResult res;
  const long d = c.degree();
  res.degree_bound = static_cast<std::size_t>(std::max(0L, (d * d * d * d - 5 * d * d + 4 * d) / 2));
  std::vector<std::pair<Point, Point>> seeds = detail::alignment_seeds(c, A);
  for (const BottleneckCandidate& bc : candidates) seeds.emplace_back(bc.pa, bc.pb);

  const double dedupe_tol = opt.dedupe_rel * A.box.diagonal();
  const NewtonSystem sys = detail::bottleneck_system(c);
  struct Slot {
    BottleneckPair pair;
    bool family = false;
  };
  std::vector<std::optional<Slot>> slots(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    const auto& [x0, y0] = seeds[i];
    NewtonOptions no;
    no.tol = 1e-14;
    const NewtonResult nr = newton_solve(sys, Eigen::Vector4d(x0.x, x0.y, y0.x, y0.y), no);
    if (!(nr.residual < opt.newton_tol)) return;
    Point x{nr.x(0), nr.x(1)}, y{nr.x(2), nr.x(3)};
    if (!(dist(x, y) > 10 * dedupe_tol)) return;  // the diagonal x = y
    if (lex_less(y, x)) std::swap(x, y);
    Slot s;
    s.pair.x = x, s.pair.y = y;
    s.pair.width = dist(x, y);
    const auto raw = bottleneck_residual(c, x, y);
    for (double v : raw) s.pair.residual_norm = std::max(s.pair.residual_norm, std::abs(v));
    Eigen::VectorXd r(4);
    Eigen::MatrixXd J(4, 4);
    sys(Eigen::Vector4d(x.x, x.y, y.x, y.y), r, &J);
    s.family = detail::smallest_singular_ratio(J) < opt.family_rank_tol;
    slots[i] = s;
  });

  // Unordered comparison: the lexicographic order of x and y is not stable under rounding.
  auto same = [&](const BottleneckPair& a, const BottleneckPair& b) {
    return std::min(std::max(dist(a.x, b.x), dist(a.y, b.y)), std::max(dist(a.x, b.y), dist(a.y, b.x))) <= dedupe_tol;
  };
  res.seeds = seeds.size();
  for (const auto& s : slots) {
    if (!s) continue;
    ++res.converged_seeds;
    if (s->family) {
      bool seen = false;
      for (const BottleneckPair& f : res.families) seen = seen || std::abs(f.width - s->pair.width) <= dedupe_tol;
      if (!seen) res.families.push_back(s->pair);
      continue;
    }
    bool dup = false;
    for (const BottleneckPair& p : res.pairs) dup = dup || same(p, s->pair);
    if (!dup) res.pairs.push_back(s->pair);
  }
  std::sort(res.pairs.begin(), res.pairs.end(), [](const BottleneckPair& a, const BottleneckPair& b) {
    return a.width != b.width ? a.width < b.width : lex_less(a.x, b.x);
  });
  std::sort(res.families.begin(), res.families.end(),
            [](const BottleneckPair& a, const BottleneckPair& b) { return a.width < b.width; });
  for (const BottleneckPair& p : res.pairs) res.rho = std::min(res.rho, p.width);
  for (const BottleneckPair& p : res.families) res.rho = std::min(res.rho, p.width);
  if (res.pairs.size() > res.degree_bound) res.warnings.push_back("bottleneck count exceeds the degree bound");
  return res;
}

/// Real singular points (F = Fx = Fy = 0) in the box: Newton on the gradient
/// from a grid of seeds, kept where F also vanishes.
inline std::vector<Point> singular_points(const Curve& c, const BoundingBox& box, int grid_n = 32) {
  if (grid_n < 2) throw ConfigError("seed grid must have at least 2 cells per side");
  const Poly2d& fx = c.fx();
  const Poly2d& fy = c.fy();
  const Poly2d fxx = fx.diff(Var::X), fxy = fx.diff(Var::Y), fyy = fy.diff(Var::Y);
  const double diag = box.diagonal();
  // Magnitudes at unit-padded coordinates so that tolerances stay meaningful near the origin.
  auto unit = [](Point p) { return Point{1 + std::abs(p.x), 1 + std::abs(p.y)}; };

  const std::size_t n = static_cast<std::size_t>(grid_n + 1);
  std::vector<std::optional<Point>> slots(n * n);
  parallel_for(n * n, [&](std::size_t idx) {
    Point p{box.xmin + box.width() * static_cast<double>(idx % n) / grid_n,
            box.ymin + box.height() * static_cast<double>(idx / n) / grid_n};
    for (int it = 0; it < 200; ++it) {
      const double gx = fx.eval(p.x, p.y), gy = fy.eval(p.x, p.y);
      if (gx == 0.0 && gy == 0.0) break;
      const double a = fxx.eval(p.x, p.y), b = fxy.eval(p.x, p.y), e = fyy.eval(p.x, p.y);
      Eigen::Matrix2d H;
      H << a, b, b, e;
      if (!(condition_estimate(H) <= 1e14)) break;
      const double det = a * e - b * b;
      const Point step{(e * gx - b * gy) / det, (a * gy - b * gx) / det};
      p = p - step;
      if (!is_finite(p) || norm(step) <= 1e-15 * diag) break;
    }
    if (!is_finite(p) || !box.inflated(1e-9 * diag).contains(p)) return;
    const Point u = unit(p);
    const bool f_zero = std::abs(c.value(p)) <= 1e-9 * c.poly().abs_eval(u.x, u.y);
    const bool g_zero = std::hypot(fx.eval(p.x, p.y), fy.eval(p.x, p.y)) <=
                        1e-7 * std::hypot(fx.abs_eval(u.x, u.y), fy.abs_eval(u.x, u.y));
    if (f_zero && g_zero) slots[idx] = p;
  });
  std::vector<Point> out;
  const double tol = 1e-6 * diag;
  for (const auto& s : slots) {
    if (!s) continue;
    bool dup = false;
    for (const Point& q : out) dup = dup || dist(*s, q) <= tol;
    if (!dup) out.push_back(*s);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

}  // namespace mcl
