#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcl/curve.hpp"
#include "mcl/delaunay.hpp"
#include "mcl/errors.hpp"
#include "mcl/features.hpp"
#include "mcl/geometry.hpp"
#include "mcl/sampler.hpp"
#include "mcl/solver.hpp"
#include "mcl/voronoi.hpp"

namespace mcl {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Sample-based estimators

struct VoronoiReach {
  double tau = 0.0;
  double curvature_bound = 0.0;   // min local radius-of-curvature estimate over sites
  double bottleneck_bound = 0.0;  // min candidate width / 2, or the bounding-disk radius
  int curvature_site = -1;        // site attaining curvature_bound
  std::optional<BottleneckCandidate> narrowest;
  std::size_t candidates = 0;
};

// Radius of a disk containing the curve: the sample's extent from its box center plus epsilon.
inline double bounding_disk_radius(const Sample& A) {
  const Point c = BoundingBox::of(A.all_points).center();
  double r = 0.0;
  for (const Point& p : A.all_points) r = std::max(r, dist(p, c));
  return r + A.epsilon;
}

/// Voronoi-based reach estimate. The curvature accumulator takes the local
/// radius estimate at every site, the bottleneck accumulator half the width of
/// every approximate bottleneck candidate.
inline VoronoiReach reach_voronoi_report(const Sample& A, const Curve& c) {
  if (A.all_points.size() < 3) throw TooFewPoints("reach estimation needs at least 3 sample points");
  VoronoiReach out;
  const VoronoiDiagram V = voronoi_from_sites(A.all_points);
  const EdgeClassification cls = classify_edges(V, c);
  std::vector<double> local(V.size());
  parallel_for(V.size(), [&](std::size_t s) {
    const Point p = V.sites[s];
    local[s] = estimate_curvature_local(A.all_points, p, default_delta(V, p));
  });
  out.curvature_bound = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < local.size(); ++s)
    if (local[s] < out.curvature_bound) out.curvature_bound = local[s], out.curvature_site = static_cast<int>(s);

  out.bottleneck_bound = bounding_disk_radius(A);
  const auto cands = bottleneck_candidates(V, cls);
  out.candidates = cands.size();
  if (!cands.empty()) {
    out.narrowest = cands.front();
    out.bottleneck_bound = std::min(out.bottleneck_bound, cands.front().width / 2);
  }
  out.tau = std::min(out.curvature_bound, out.bottleneck_bound);
  return out;
}

inline double reach_voronoi(const Sample& A, const Curve& c) { return reach_voronoi_report(A, c).tau; }

/// Delaunay-based reach estimate: the least distance from a Delaunay
/// circumcenter to the sample.
inline double reach_delaunay(const Sample& A) {
  const Triangulation T = delaunay_triangulate(A.all_points);
  const VoronoiDiagram V = voronoi_dual(T);
  double tau = std::numeric_limits<double>::infinity();
  for (const CircumcenterInfo& info : medial_axis_circumcenters(T, V)) tau = std::min(tau, info.nearest_site_distance);
  return tau;
}

// ---------------------------------------------------------------------------
// Exact reach

struct ReachReport {
  double q = 0.0;    // min radius of curvature
  double rho = 0.0;  // narrowest bottleneck width
  double tau_exact = 0.0;
  double tau_voronoi = 0.0;
  double tau_delaunay = 0.0;
  std::size_t sample_size = 0;
  double epsilon = 0.0;
  CriticalCurvatureResult critical;
  BottleneckResult bottlenecks;
  VoronoiReach voronoi;
  std::vector<std::string> warnings;
};

/// tau = min(q, rho / 2) from the solver, alongside both sample-based estimates.
inline ReachReport reach_exact(const Curve& c, const Sample& A, const SolverOptions& opt = {}) {
  if (!A.singular_points.empty()) throw SingularCurve("the sample declares singular points; reach is zero");
  const auto sing = singular_points(c, A.box);
  if (!sing.empty())
    throw SingularCurve("singular point at (" + std::to_string(sing[0].x) + ", " + std::to_string(sing[0].y) + ")");
  ReachReport r;
  r.sample_size = A.size();
  r.epsilon = A.epsilon;
  r.critical = curvature_extrema(c, A, opt);
  r.voronoi = reach_voronoi_report(A, c);
  std::vector<BottleneckCandidate> seeds;
  if (r.voronoi.narrowest) seeds.push_back(*r.voronoi.narrowest);
  r.bottlenecks = real_bottlenecks(c, A, seeds, opt);
  r.q = r.critical.q;
  r.rho = r.bottlenecks.rho;
  r.tau_exact = std::min(r.q, r.rho / 2);
  r.tau_voronoi = r.voronoi.tau;
  r.tau_delaunay = reach_delaunay(A);
  r.warnings = A.warnings;
  r.warnings.insert(r.warnings.end(), r.critical.warnings.begin(), r.critical.warnings.end());
  r.warnings.insert(r.warnings.end(), r.bottlenecks.warnings.begin(), r.bottlenecks.warnings.end());
  return r;
}

// ---------------------------------------------------------------------------
// Set distances

/// A compact set given as isolated points and segments.
struct SetSoup {
  std::vector<Point> points;
  std::vector<Segment> segments;

  bool empty() const noexcept { return points.empty() && segments.empty(); }
  BoundingBox bounds() const {
    std::vector<Point> all = points;
    for (const Segment& s : segments) all.push_back(s.a), all.push_back(s.b);
    return BoundingBox::of(all);
  }
};

inline SetSoup triangle_soup(const std::array<Point, 3>& t) {
  return {{}, {{t[0], t[1]}, {t[1], t[2]}, {t[2], t[0]}}};
}

namespace detail {

// Uniform bucket grid over a soup's elements for nearest-distance queries.
class SoupIndex {
 public:
  explicit SoupIndex(const SetSoup& s) {
    for (const Point& p : s.points) items_.push_back({p, p});
    items_.insert(items_.end(), s.segments.begin(), s.segments.end());
    box_ = s.bounds();
    n_ = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(items_.size()))), 1, 512);
    cw_ = box_.width() / n_, ch_ = box_.height() / n_;
    cells_.resize(static_cast<std::size_t>(n_) * n_);
    for (int i = 0; i < static_cast<int>(items_.size()); ++i) {
      const Segment& g = items_[i];
      const int x0 = cx(std::min(g.a.x, g.b.x)), x1 = cx(std::max(g.a.x, g.b.x));
      const int y0 = cy(std::min(g.a.y, g.b.y)), y1 = cy(std::max(g.a.y, g.b.y));
      for (int u = x0; u <= x1; ++u)
        for (int v = y0; v <= y1; ++v) cells_[static_cast<std::size_t>(v) * n_ + u].push_back(i);
    }
  }

  double distance(Point p) const {
    const int i0 = cx(p.x), j0 = cy(p.y);
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0;; ++r) {
      const int ilo = i0 - r, ihi = i0 + r, jlo = j0 - r, jhi = j0 + r;
      for (int j = std::max(jlo, 0); j <= std::min(jhi, n_ - 1); ++j)
        for (int i = std::max(ilo, 0); i <= std::min(ihi, n_ - 1); ++i) {
          if (r > 0 && i != ilo && i != ihi && j != jlo && j != jhi) continue;  // ring only
          for (int k : cells_[static_cast<std::size_t>(j) * n_ + i])
            best = std::min(best, point_segment_distance(p, items_[k].a, items_[k].b));
        }
      // Everything not yet visited lies beyond the searched square.
      double bound = std::numeric_limits<double>::infinity();
      if (ilo > 0) bound = std::min(bound, p.x - (box_.xmin + ilo * cw_));
      if (ihi < n_ - 1) bound = std::min(bound, box_.xmin + (ihi + 1) * cw_ - p.x);
      if (jlo > 0) bound = std::min(bound, p.y - (box_.ymin + jlo * ch_));
      if (jhi < n_ - 1) bound = std::min(bound, box_.ymin + (jhi + 1) * ch_ - p.y);
      if (best <= bound || std::isinf(bound)) return best;
    }
  }

 private:
  int cx(double x) const { return std::clamp(static_cast<int>(std::floor((x - box_.xmin) / cw_)), 0, n_ - 1); }
  int cy(double y) const { return std::clamp(static_cast<int>(std::floor((y - box_.ymin) / ch_)), 0, n_ - 1); }

  std::vector<Segment> items_;
  std::vector<std::vector<int>> cells_;
  BoundingBox box_;
  int n_ = 1;
  double cw_ = 1, ch_ = 1;
};

// sup over A of the distance to B; segments of A are walked at spacing h.
inline double directed_hausdorff(const SetSoup& a, const SoupIndex& b, double h) {
  double worst = 0.0;
  for (const Point& p : a.points) worst = std::max(worst, b.distance(p));
  for (const Segment& s : a.segments) {
    const int n = std::max(1, static_cast<int>(std::ceil(dist(s.a, s.b) / h)));
    for (int k = 0; k <= n; ++k) worst = std::max(worst, b.distance(s.a + (static_cast<double>(k) / n) * (s.b - s.a)));
  }
  return worst;
}

}  // namespace detail

/// Hausdorff distance between two soups. Distances to the other set are exact;
/// segments of the first set are walked at 1e-3 of the joint diameter.
inline double hausdorff(const SetSoup& a, const SetSoup& b) {
  if (a.empty() || b.empty()) throw EmptySet("Hausdorff distance of an empty set");
  const BoundingBox ba = a.bounds(), bb = b.bounds();
  const BoundingBox joint{std::min(ba.xmin, bb.xmin), std::max(ba.xmax, bb.xmax), std::min(ba.ymin, bb.ymin),
                          std::max(ba.ymax, bb.ymax)};
  const double h = 1e-3 * joint.diagonal();
  const detail::SoupIndex ia(a), ib(b);
  return std::max(detail::directed_hausdorff(a, ib, h), detail::directed_hausdorff(b, ia, h));
}

inline double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  return hausdorff(SetSoup{a, {}}, SetSoup{b, {}});
}

// ---------------------------------------------------------------------------
// Wijsman profiles

/// A closed convex region: an intersection of half-planes n.x <= c, with its
/// boundary pieces for exact distance queries.
struct ConvexRegion {
  struct HalfPlane {
    Point n;
    double c;
  };
  std::vector<HalfPlane> halfplanes;
  std::vector<VoronoiEdge> boundary;

  bool contains(Point x) const {
    for (const HalfPlane& h : halfplanes)
      if (dot(h.n, x) > h.c) return false;
    return true;
  }
  double distance(Point x) const {
    if (contains(x)) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (const VoronoiEdge& e : boundary) d = std::min(d, e.distance(x));
    return d;
  }

  static ConvexRegion half_plane(Point n, double c) {
    ConvexRegion r;
    r.halfplanes.push_back({n, c});
    VoronoiEdge e;
    e.kind = EdgeKind::Line;
    e.p = (c / norm2(n)) * n;
    e.dir = normalized(perp(n));
    r.boundary.push_back(e);
    return r;
  }
};

/// The Voronoi cell of site s as a convex region.
inline ConvexRegion cell_region(const VoronoiDiagram& V, int s) {
  ConvexRegion r;
  const Point a = V.sites[s];
  for (int e : V.cells[s].edges) {
    const Point b = V.sites[V.edges[e].other(s)];
    r.halfplanes.push_back({b - a, dot(b - a, (a + b) / 2.0)});
    r.boundary.push_back(V.edges[e]);
  }
  return r;
}

/// Distances from x to each region of a sequence.
inline std::vector<double> wijsman_profile(Point x, const std::vector<ConvexRegion>& sets) {
  std::vector<double> out;
  out.reserve(sets.size());
  for (const ConvexRegion& r : sets) out.push_back(r.distance(x));
  return out;
}

// ---------------------------------------------------------------------------
// Convergence harness

struct ConvergenceOptions {
  std::vector<Point> probes;     // Wijsman probe points
  std::optional<Point> anchor;   // the cell of the site nearest this point is tracked; default: first traced point
  int tracked_triangles = 2;     // largest-area Delaunay triangles followed across rows
  std::vector<Point> singular;   // declared singular points
  std::vector<Point> pins;       // curve points forced into the first sample (see pin_point)
  int grid_n = 64;
  // Rows after the first refine the previous sample (nested samples) instead of
  // tracing afresh, so successive rows differ only by the inserted points.
  bool nested = true;
};

struct ConvergenceRow {
  double epsilon = 0.0;
  std::size_t sample_size = 0;
  Point tracked_site;
  std::vector<double> wijsman;  // per probe: distance to the tracked cell
  std::vector<std::array<Point, 3>> triangles;
  // Self-convergence to the next (halved) row; NaN in the last row.
  std::vector<double> triangle_hausdorff;
  double medial_hausdorff = kNaN;

  // Metric values by name, in a fixed order.
  std::vector<std::pair<std::string, double>> metrics() const {
    std::vector<std::pair<std::string, double>> out;
    for (std::size_t k = 0; k < wijsman.size(); ++k) out.emplace_back("wijsman_" + std::to_string(k), wijsman[k]);
    for (std::size_t k = 0; k < triangle_hausdorff.size(); ++k)
      out.emplace_back("triangle_hausdorff_" + std::to_string(k), triangle_hausdorff[k]);
    out.emplace_back("medial_hausdorff", medial_hausdorff);
    return out;
  }
};

/// The k Delaunay triangles of largest area, largest first.
inline std::vector<std::array<Point, 3>> largest_triangles(const Triangulation& T, int k) {
  std::vector<int> idx(T.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto area = [&](int t) {
    const auto& tr = T.triangles[t];
    return std::abs(cross(T.sites[tr[1]] - T.sites[tr[0]], T.sites[tr[2]] - T.sites[tr[0]])) / 2;
  };
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return area(a) > area(b); });
  std::vector<std::array<Point, 3>> out;
  for (int i = 0; i < std::min<int>(k, static_cast<int>(idx.size())); ++i) {
    const auto& tr = T.triangles[idx[i]];
    out.push_back({T.sites[tr[0]], T.sites[tr[1]], T.sites[tr[2]]});
  }
  return out;
}

/// Samples at eps0, eps0/2, ..., eps0/2^halvings and measures how the tracked
/// Voronoi cell, the largest Delaunay triangles and the short-edge medial set settle.
inline std::vector<ConvergenceRow> convergence_experiment(const Curve& c, const BoundingBox& box, double eps0,
                                                          int halvings, const ConvergenceOptions& opt = {}) {
  if (halvings < 0 || halvings > 6) throw ConfigError("halvings must be between 0 and 6");
  if (!(eps0 > 0)) throw ConfigError("epsilon must be positive");
  std::vector<ConvergenceRow> rows;
  std::vector<SetSoup> medial;
  std::optional<Point> anchor = opt.anchor;
  double eps = eps0;
  Sample A;
  for (int i = 0; i <= halvings; ++i, eps /= 2) {
    if (i > 0 && opt.nested) {
      A = refine_sample(c, A);
    } else {
      A = epsilon_sample(c, box, eps, opt.singular, opt.grid_n);
      for (const Point& p : opt.pins) pin_point(c, A, p);
    }
    const Triangulation T = delaunay_triangulate(A.all_points);
    const VoronoiDiagram V = voronoi_dual(T);
    const EdgeClassification cls = classify_edges(V, c);
    if (!anchor) anchor = A.components.empty() ? A.all_points.front() : A.components.front().points.front();

    ConvergenceRow row;
    row.epsilon = eps;
    row.sample_size = A.size();
    const int s = V.locate(*anchor);
    row.tracked_site = V.sites[s];
    // Nested samples keep every earlier point, so later rows follow this very site.
    if (i == 0 && opt.nested) anchor = row.tracked_site;
    const ConvexRegion cell = cell_region(V, s);
    for (const Point& x : opt.probes) row.wijsman.push_back(cell.distance(x));
    row.triangles = largest_triangles(T, opt.tracked_triangles);
    rows.push_back(std::move(row));

    SetSoup m;
    for (const Segment& seg : medial_segments(medial_axis_short_edges(V, cls, eps), box)) m.segments.push_back(seg);
    medial.push_back(std::move(m));
  }
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const std::size_t k = std::min(rows[i].triangles.size(), rows[i + 1].triangles.size());
    for (std::size_t t = 0; t < k; ++t)
      rows[i].triangle_hausdorff.push_back(
          hausdorff(triangle_soup(rows[i].triangles[t]), triangle_soup(rows[i + 1].triangles[t])));
    if (!medial[i].empty() && !medial[i + 1].empty()) rows[i].medial_hausdorff = hausdorff(medial[i], medial[i + 1]);
  }
  if (!rows.empty()) rows.back().triangle_hausdorff.assign(rows.back().triangles.size(), kNaN);
  return rows;
}

}  // namespace mcl
