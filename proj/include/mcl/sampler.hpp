#pragma once

// Epsilon-samples of V(F) in a box: sign-change seeds on a grid, then a
// predictor-corrector march along each component.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mcl/curve.hpp"
#include "mcl/errors.hpp"
#include "mcl/geometry.hpp"

namespace mcl {

struct Component {
  std::vector<Point> points;  // in traversal order
  bool closed = false;        // last point links back to the first
};

struct Sample {
  double epsilon = 0.0;
  BoundingBox box;
  std::vector<Component> components;
  std::vector<Point> singular_points;
  std::vector<Point> all_points;  // components in order, then singular points; no duplicates
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return all_points.size(); }
};

struct TraceOptions {
  double max_curvature_step = 0.2;  // step <= this / local curvature
  int max_halvings = 20;
  double max_turn_degrees = 60.0;
  std::size_t max_points = 2'000'000;
};

namespace detail {

enum class ArcEnd { Closed, BoxExit, Singular, Limit };

struct Arc {
  std::vector<Point> points;
  ArcEnd end_forward = ArcEnd::Closed;
  ArcEnd end_backward = ArcEnd::Closed;
  bool closed = false;
};

// Project q onto V(F) along the gradient; nullopt if the iteration stalls.
inline std::optional<Point> project_to_curve(const Curve& c, Point q, int max_iter = 30) {
  for (int i = 0; i < max_iter; ++i) {
    const double f = c.value(q);
    if (std::abs(f) <= 1e-12 * c.scale(q)) return q;
    const Point g = c.gradient(q);
    const double g2 = norm2(g);
    if (!(g2 > 0.0) || !std::isfinite(g2)) return std::nullopt;
    q = q - (f / g2) * g;
  }
  if (c.on_curve(q)) return q;
  return std::nullopt;
}

inline Point unit_tangent(const Curve& c, Point p) { return normalized(perp(c.gradient(p))); }

inline double step_bound(const Curve& c, Point p, double epsilon, double kstep) {
  const double h = epsilon / 2;
  const Jet2 j = c.jet(p);
  const double g2 = j.fx * j.fx + j.fy * j.fy;
  const double d = j.fxx * j.fy * j.fy - 2.0 * j.fxy * j.fx * j.fy + j.fyy * j.fx * j.fx;
  const double kappa = std::abs(d) / (g2 * std::sqrt(g2));
  if (!std::isfinite(kappa)) return 0.0;
  return kappa > 0 ? std::min(h, kstep / kappa) : h;
}

struct Front {
  Point p;
  Point t;  // unit tangent, oriented along the direction of travel
  std::vector<Point> pts;
  std::optional<ArcEnd> stopped;
};

// One predictor-corrector step; returns the accepted point or nullopt (front stops).
inline std::optional<Point> advance(const Curve& c, Front& fr, double epsilon, const BoundingBox& box,
                                    const TraceOptions& opt) {
  const double cos_max = std::cos(opt.max_turn_degrees * M_PI / 180.0);
  double h = step_bound(c, fr.p, epsilon, opt.max_curvature_step);
  if (!(h > 1e-9 * epsilon)) {
    fr.stopped = ArcEnd::Singular;
    return std::nullopt;
  }
  for (int k = 0; k <= opt.max_halvings; ++k, h /= 2) {
    const Point pred = fr.p + h * fr.t;
    const auto q = project_to_curve(c, pred);
    if (!q) continue;
    const double chord = dist(*q, fr.p);
    if (chord > epsilon || chord < 0.25 * h || dist(*q, pred) > 0.5 * h) continue;
    if (dot(*q - fr.p, fr.t) <= 0) continue;
    Point tq = unit_tangent(c, *q);
    if (!is_finite(tq) || norm2(tq) == 0.0) continue;
    if (dot(tq, fr.t) < 0) tq = -1.0 * tq;
    if (dot(tq, fr.t) < cos_max) continue;
    if (!box.contains(*q)) {
      fr.stopped = ArcEnd::BoxExit;
      return std::nullopt;
    }
    fr.p = *q;
    fr.t = tq;
    return *q;
  }
  fr.stopped = ArcEnd::Singular;
  return std::nullopt;
}

// March from the seed in both directions at once. A closed component ends
// where the two fronts meet, so the seed sits in the middle of a regular run.
inline Arc trace_arc(const Curve& c, Point seed, double epsilon, const BoundingBox& box, const TraceOptions& opt = {}) {
  if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
  if (!c.on_curve(seed)) throw NotOnCurve("trace seed is not on the curve");
  const Point t0 = unit_tangent(c, seed);
  if (!is_finite(t0) || norm2(t0) == 0.0) throw SingularEncounter("trace seed is a singular point");
  Front fw{seed, t0, {}, std::nullopt}, bw{seed, -1.0 * t0, {}, std::nullopt};
  Arc arc;
  std::size_t total = 1;
  while (!fw.stopped || !bw.stopped) {
    for (Front* fr : {&fw, &bw}) {
      if (fr->stopped) continue;
      Front* other = fr == &fw ? &bw : &fw;
      // Meeting test: the other front lies just ahead along our direction.
      if (!other->stopped && fw.pts.size() >= 2 && bw.pts.size() >= 2) {
        const Point gap = other->p - fr->p;
        const double h = step_bound(c, fr->p, epsilon, opt.max_curvature_step);
        if (norm(gap) <= std::max(h, 0.0) * 1.25 && dot(gap, fr->t) > 0 && dot(fr->t, other->t) < 0) {
          // Drop a nearly coincident point so the closing chord is not tiny.
          if (norm(gap) < 0.25 * h && !fr->pts.empty()) fr->pts.pop_back();
          arc.closed = true;
          fw.stopped = bw.stopped = ArcEnd::Closed;
          break;
        }
      }
      if (const auto q = advance(c, *fr, epsilon, box, opt)) {
        fr->pts.push_back(*q);
        if (++total >= opt.max_points) fw.stopped = bw.stopped = ArcEnd::Limit;
      }
    }
  }
  arc.end_forward = *fw.stopped;
  arc.end_backward = *bw.stopped;
  arc.points.reserve(total);
  for (auto it = bw.pts.rbegin(); it != bw.pts.rend(); ++it) arc.points.push_back(*it);
  arc.points.push_back(seed);
  arc.points.insert(arc.points.end(), fw.pts.begin(), fw.pts.end());
  // Rotate a closed loop so it starts at the seed.
  if (arc.closed)
    std::rotate(arc.points.begin(), arc.points.begin() + static_cast<std::ptrdiff_t>(bw.pts.size()), arc.points.end());
  return arc;
}

inline Point bisect_sign_change(const Curve& c, Point a, Point b) {
  const bool sa = c.value(a) > 0;
  for (int i = 0; i < 80; ++i) {
    const Point m = (a + b) / 2.0;
    if (m == a || m == b) break;
    if ((c.value(m) > 0) == sa) a = m;
    else b = m;
  }
  return std::abs(c.value(a)) <= std::abs(c.value(b)) ? a : b;
}

// Rebuilds all_points from the components and singular points.
inline void assemble_points(Sample& s) {
  s.all_points.clear();
  // Declared singular points always survive. Traces stop a hair short of a
  // singular point; what they leave that close to it is dropped.
  const double dup_tol = 1e-6 * s.box.diagonal();
  for (const Component& comp : s.components)
    for (const Point& p : comp.points) {
      bool dup = false;
      for (const Point& q : s.singular_points) dup = dup || dist(p, q) <= dup_tol;
      if (!dup) s.all_points.push_back(p);
    }
  s.all_points.insert(s.all_points.end(), s.singular_points.begin(), s.singular_points.end());
  // Tracing different seeds can still revisit a stretch of curve; drop exact repeats.
  std::vector<Point> sorted = s.all_points;
  std::sort(sorted.begin(), sorted.end(), lex_less);
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    std::vector<Point> uniq;
    for (const Point& p : s.all_points) {
      bool dup = false;
      for (const Point& q : uniq) dup = dup || p == q;
      if (!dup) uniq.push_back(p);
    }
    s.all_points = std::move(uniq);
  }
}

}  // namespace detail

/// Points of V(F) found on the edges of a grid_n x grid_n grid over the box.
inline std::vector<Point> seed_points(const Curve& c, const BoundingBox& box, int grid_n = 64) {
  if (grid_n < 8) throw ConfigError("seed grid must be at least 8");
  const int n = grid_n;
  auto node = [&](int i, int j) {
    return Point{box.xmin + box.width() * i / n, box.ymin + box.height() * j / n};
  };
  std::vector<double> val(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) val[i * (n + 1) + j] = c.value(node(i, j));
  auto v = [&](int i, int j) { return val[i * (n + 1) + j]; };

  std::vector<Point> out;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const Point p = node(i, j);
      if (c.on_curve(p)) {
        out.push_back(p);
        continue;
      }
      if (i < n && !c.on_curve(node(i + 1, j)) && (v(i, j) > 0) != (v(i + 1, j) > 0))
        out.push_back(detail::bisect_sign_change(c, p, node(i + 1, j)));
      if (j < n && !c.on_curve(node(i, j + 1)) && (v(i, j) > 0) != (v(i, j + 1) > 0))
        out.push_back(detail::bisect_sign_change(c, p, node(i, j + 1)));
    }
  }
  if (out.empty()) throw NoRealPoints("no real points of the curve found in the box");
  return out;
}

/// Ordered points along the component through seed, spaced by chords of at most epsilon.
/// Throws SingularEncounter or BoxExit when the component cannot be closed.
inline std::vector<Point> trace_component(const Curve& c, Point seed, double epsilon, const BoundingBox& box,
                                          const TraceOptions& opt = {}) {
  detail::Arc arc = detail::trace_arc(c, seed, epsilon, box, opt);
  using detail::ArcEnd;
  if (arc.end_forward == ArcEnd::Singular || arc.end_backward == ArcEnd::Singular)
    throw SingularEncounter("tracing stopped at a point where the gradient vanishes or the curve turns too sharply");
  if (arc.end_forward == ArcEnd::BoxExit || arc.end_backward == ArcEnd::BoxExit)
    throw BoxExit("the curve leaves the bounding box; it is not compact in this window");
  return arc.points;
}

/// An epsilon-sample: every component seeded in the box, traced, plus the declared singular points.
inline Sample epsilon_sample(const Curve& c, const BoundingBox& box, double epsilon,
                             const std::vector<Point>& singular = {}, int grid_n = 64, const TraceOptions& opt = {}) {
  if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
  Sample s;
  s.epsilon = epsilon;
  s.box = box;
  std::vector<Point> seeds = seed_points(c, box, grid_n);
  std::sort(seeds.begin(), seeds.end(), lex_less);
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  auto covered = [&](Point p) {
    for (const Component& comp : s.components)
      for (const Point& q : comp.points)
        if (dist(p, q) <= epsilon) return true;
    for (const Point& q : singular)
      if (dist(p, q) <= epsilon) return true;
    return false;
  };
  const double grad_tol = 1e-8;
  for (const Point& seed : seeds) {
    if (covered(seed)) continue;
    const Point g = c.gradient(seed);
    if (norm(g) <= grad_tol * std::max(1.0, c.gradient_scale(seed))) continue;  // a singular point itself
    detail::Arc arc = detail::trace_arc(c, seed, epsilon, box, opt);
    if (!arc.closed) {
      auto why = [](detail::ArcEnd e) {
        return e == detail::ArcEnd::BoxExit ? "box exit" : e == detail::ArcEnd::Singular ? "singular point" : "size limit";
      };
      s.warnings.push_back("open arc from seed (" + std::to_string(seed.x) + ", " + std::to_string(seed.y) +
                           "): " + why(arc.end_backward) + " / " + why(arc.end_forward));
    }
    s.components.push_back({std::move(arc.points), arc.closed});
  }

  for (const Point& p : singular) {
    if (!c.on_curve(p, 1e-6)) throw NotOnCurve("declared singular point is not on the curve");
    s.singular_points.push_back(p);
  }
  detail::assemble_points(s);
  return s;
}

/// The epsilon whose sample has exactly (or as nearly as possible) target points, by bisection.
inline double epsilon_for_point_count(const Curve& c, const BoundingBox& box, std::size_t target,
                                      const std::vector<Point>& singular = {}, int grid_n = 64) {
  if (target < 3) throw ConfigError("target point count must be at least 3");
  double hi = box.diagonal() / 4, lo = hi;
  // Bracket: size(lo) >= target >= size(hi).
  while (epsilon_sample(c, box, hi, singular, grid_n).size() > target) {
    hi *= 2;
    if (hi > 1e3 * box.diagonal()) throw ConfigError("requested point count is below the coarsest sample size");
  }
  while (epsilon_sample(c, box, lo, singular, grid_n).size() < target) {
    lo /= 2;
    if (lo < 1e-9 * box.diagonal()) throw ConfigError("cannot reach the requested point count");
  }
  double best = lo;
  std::size_t best_err = static_cast<std::size_t>(-1);
  for (int it = 0; it < 60; ++it) {
    const double mid = std::sqrt(lo * hi);
    const std::size_t n = epsilon_sample(c, box, mid, singular, grid_n).size();
    const std::size_t err = n > target ? n - target : target - n;
    if (err < best_err || (err == best_err && mid > best)) best_err = err, best = mid;
    if (n == target) break;
    if (n > target) lo = mid;
    else hi = mid;
    if (hi / lo < 1 + 1e-12) break;
  }
  return best;
}

/// An epsilon/2-sample containing A: every chord gets its midpoint projected
/// onto the curve. Chords whose midpoint does not project back between their
/// ends are left alone.
inline Sample refine_sample(const Curve& c, const Sample& A) {
  Sample out;
  out.epsilon = A.epsilon / 2;
  out.box = A.box;
  out.singular_points = A.singular_points;
  out.warnings = A.warnings;
  for (const Component& comp : A.components) {
    Component fine;
    fine.closed = comp.closed;
    const std::size_t m = comp.points.size();
    for (std::size_t k = 0; k < m; ++k) {
      fine.points.push_back(comp.points[k]);
      if (k + 1 == m && !comp.closed) break;
      const Point p = comp.points[k], q = comp.points[(k + 1) % m];
      const auto mid = detail::project_to_curve(c, (p + q) / 2.0);
      if (mid && dist(*mid, (p + q) / 2.0) <= dist(p, q) / 2) fine.points.push_back(*mid);
    }
    out.components.push_back(std::move(fine));
  }
  detail::assemble_points(out);
  return out;
}

/// Inserts the curve point nearest p into A, between the ends of the closest
/// chord, so that later refinements keep it. Returns the inserted point.
inline Point pin_point(const Curve& c, Sample& A, Point p) {
  const auto q = detail::project_to_curve(c, p);
  if (!q || !c.on_curve(*q, 1e-9)) throw NotOnCurve("pinned point does not project onto the curve");
  Component* best = nullptr;
  std::size_t at = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (Component& comp : A.components) {
    const std::size_t m = comp.points.size();
    for (std::size_t k = 0; k < m; ++k) {
      if (k + 1 == m && !comp.closed) break;
      const double d = point_segment_distance(*q, comp.points[k], comp.points[(k + 1) % m]);
      if (d < bd) bd = d, best = &comp, at = k + 1;
    }
  }
  if (!best) throw EmptySet("sample has no chords to pin into");
  if (std::find(best->points.begin(), best->points.end(), *q) == best->points.end())
    best->points.insert(best->points.begin() + static_cast<std::ptrdiff_t>(at), *q);
  detail::assemble_points(A);
  return *q;
}

/// Foot point on V(F) of p, by Newton on F(q) = 0, (p - q) x grad F(q) = 0 from seed.
inline Point nearest_point_on_curve(const Curve& c, Point p, Point seed, int max_iter = 50) {
  Point q = seed;
  auto residual = [&](Point x, double& r1, double& r2) {
    const Jet2 j = c.jet(x);
    r1 = j.f;
    r2 = (p.x - x.x) * j.fy - (p.y - x.y) * j.fx;
    return j;
  };
  for (int it = 0; it < max_iter; ++it) {
    double r1, r2;
    const Jet2 j = residual(q, r1, r2);
    const double tol1 = 1e-10 * std::max(c.scale(q), 1e-300);
    const double tol2 = 1e-10 * (dist(p, q) * c.gradient_scale(q) + 1e-300);
    if (std::abs(r1) <= tol1 && std::abs(r2) <= tol2) return q;
    const double dx = p.x - q.x, dy = p.y - q.y;
    const double a11 = j.fx, a12 = j.fy;
    const double a21 = -j.fy + dx * j.fxy - dy * j.fxx;
    const double a22 = dx * j.fyy + j.fx - dy * j.fxy;
    const double det = a11 * a22 - a12 * a21;
    if (det == 0.0 || !std::isfinite(det)) break;
    const Point step{(r1 * a22 - r2 * a12) / det, (a11 * r2 - a21 * r1) / det};
    // Damped update: halve while the residual grows.
    const double r0 = std::hypot(r1 / tol1, r2 / tol2);
    double lambda = 1.0;
    Point next = q - step;
    for (int k = 0; k < 10; ++k) {
      double s1, s2;
      residual(next, s1, s2);
      if (std::hypot(s1 / tol1, s2 / tol2) < r0) break;
      lambda /= 2;
      next = q - lambda * step;
    }
    q = next;
  }
  throw NoConvergence("foot point iteration did not converge");
}

}  // namespace mcl
