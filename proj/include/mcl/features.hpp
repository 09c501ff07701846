#pragma once

// Metric features read off the Voronoi diagram of a curve sample: short and
// long edges, medial-axis approximations, normals, local curvature radii, and
// approximate bottleneck candidates.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcl/curve.hpp"
#include "mcl/delaunay.hpp"
#include "mcl/errors.hpp"
#include "mcl/geometry.hpp"
#include "mcl/parallel.hpp"
#include "mcl/voronoi.hpp"

namespace mcl {

struct EdgeClassification {
  std::vector<EdgeClass> classes;         // per Voronoi edge; degenerate edges stay Unclassified
  std::vector<int> long_edges;            // per site
  std::vector<std::string> warnings;      // cells whose long-edge count is not 2

  std::size_t count(EdgeClass c) const { return static_cast<std::size_t>(std::count(classes.begin(), classes.end(), c)); }
};

struct ClassifyOptions {
  int subdivisions = 64;
  double on_curve_tol = Curve::kOnCurveTol;
};

namespace detail {

// The finite piece of an edge that is searched for curve crossings.
inline std::pair<Point, Point> edge_extent(const VoronoiEdge& e, double reach) {
  switch (e.kind) {
    case EdgeKind::Segment: return {e.p, e.q};
    case EdgeKind::Ray: return {e.p, e.p + reach * e.dir};
    case EdgeKind::Line: return {e.p - reach * e.dir, e.p + reach * e.dir};
  }
  return {e.p, e.p};
}

inline bool meets_curve(const Curve& c, Point a, Point b, const ClassifyOptions& opt) {
  const int n = opt.subdivisions;
  double prev = 0;
  for (int i = 0; i <= n; ++i) {
    const Point x = a + (static_cast<double>(i) / n) * (b - a);
    const double v = c.value(x);
    if (std::abs(v) <= opt.on_curve_tol * c.scale(x)) return true;
    if (i > 0 && (v > 0) != (prev > 0)) return true;
    prev = v;
  }
  return false;
}

}  // namespace detail

/// Long edges meet V(F), short edges miss it. Rays are searched up to twice
/// the sites' bounding-box diagonal beyond their origin's offset from the sites.
inline EdgeClassification classify_edges(const VoronoiDiagram& V, const Curve& c, const ClassifyOptions& opt = {}) {
  EdgeClassification out;
  out.classes.assign(V.edges.size(), EdgeClass::Unclassified);
  const Point center = BoundingBox::of(V.sites).center();
  parallel_for(V.edges.size(), [&](std::size_t i) {
    const VoronoiEdge& e = V.edges[i];
    if (e.degenerate) return;
    const double reach = 2.0 * V.scale + dist(e.p, center);
    const auto [a, b] = detail::edge_extent(e, reach);
    out.classes[i] = detail::meets_curve(c, a, b, opt) ? EdgeClass::Long : EdgeClass::Short;
  });
  out.long_edges.assign(V.size(), 0);
  for (std::size_t s = 0; s < V.size(); ++s) {
    for (int e : V.cells[s].edges) out.long_edges[s] += out.classes[e] == EdgeClass::Long;
    if (out.long_edges[s] != 2)
      out.warnings.push_back("cell of site " + std::to_string(s) + " has " + std::to_string(out.long_edges[s]) +
                             " long edges");
  }
  return out;
}

inline void apply_classes(VoronoiDiagram& V, const EdgeClassification& cls) {
  for (std::size_t i = 0; i < V.edges.size(); ++i) V.edges[i].cls = cls.classes[i];
}

struct Segment {
  Point a, b;
};

struct Ray {
  Point origin, dir;
};

struct MedialApprox {
  std::vector<Segment> short_edges;  // bounded short edges
  std::vector<Ray> short_rays;       // unbounded short edges (exterior medial branches)
  std::vector<Point> circumcenters;
  double epsilon = 0.0;
};

/// The union of short edges.
inline MedialApprox medial_axis_short_edges(const VoronoiDiagram& V, const EdgeClassification& cls, double epsilon = 0) {
  MedialApprox m;
  m.epsilon = epsilon;
  for (std::size_t i = 0; i < V.edges.size(); ++i) {
    if (cls.classes[i] != EdgeClass::Short) continue;
    const VoronoiEdge& e = V.edges[i];
    if (e.kind == EdgeKind::Segment) m.short_edges.push_back({e.p, e.q});
    else if (e.kind == EdgeKind::Ray) m.short_rays.push_back({e.p, e.dir});
    else {
      m.short_rays.push_back({e.p, e.dir});
      m.short_rays.push_back({e.p, -1.0 * e.dir});
    }
  }
  return m;
}

// Short edges as a compact segment soup, rays cut at the box.
inline std::vector<Segment> medial_segments(const MedialApprox& m, const BoundingBox& box) {
  std::vector<Segment> out;
  for (Segment s : m.short_edges)
    if (clip_segment(s.a, s.b, box)) out.push_back(s);
  for (const Ray& r : m.short_rays) {
    const double t = ray_exit_parameter(r.origin, r.dir, box);
    if (t < 0) continue;
    Segment s{r.origin, r.origin + t * r.dir};
    if (clip_segment(s.a, s.b, box)) out.push_back(s);
  }
  return out;
}

struct CircumcenterInfo {
  Point center;
  double radius = 0.0;
  double nearest_site_distance = 0.0;
  int triangle = -1;
};

/// Every Delaunay circumcenter with its radius and distance to the nearest site.
inline std::vector<CircumcenterInfo> medial_axis_circumcenters(const Triangulation& T, const VoronoiDiagram& V) {
  std::vector<CircumcenterInfo> out(T.size());
  parallel_for(T.size(), [&](std::size_t t) {
    const Circle& c = T.circumdata[t];
    const int s = V.locate(c.center, T.triangles[t][0]);
    out[t] = {c.center, c.radius, dist(c.center, V.sites[s]), static_cast<int>(t)};
  });
  return out;
}

/// Average of the two long-edge directions of a site's cell, as a unit vector.
inline Point estimate_normal(const VoronoiDiagram& V, int site, const EdgeClassification& cls) {
  std::vector<const VoronoiEdge*> longs;
  for (int e : V.cells[site].edges)
    if (cls.classes[e] == EdgeClass::Long) longs.push_back(&V.edges[e]);
  if (longs.size() != 2)
    throw BadCellStructure("cell of site " + std::to_string(site) + " has " + std::to_string(longs.size()) +
                           " long edges, expected 2");
  auto direction = [](const VoronoiEdge& e) { return e.kind == EdgeKind::Segment ? normalized(e.q - e.p) : e.dir; };
  // A ray's direction is meaningful (outward); align the other edge with it.
  if (longs[0]->kind != EdgeKind::Ray && longs[1]->kind == EdgeKind::Ray) std::swap(longs[0], longs[1]);
  const Point d0 = direction(*longs[0]);
  Point d1 = direction(*longs[1]);
  if (dot(d0, d1) < 0) d1 = -1.0 * d1;
  return normalized(d0 + d1);
}

// Points of the sample within delta of p.
inline std::vector<Point> restrict_to_ball(std::span<const Point> pts, Point p, double delta) {
  std::vector<Point> out;
  for (const Point& q : pts)
    if (dist(p, q) <= delta) out.push_back(q);
  return out;
}

/// Local radius-of-curvature estimate at p: the distance from the sample point
/// nearest p to the closest vertex of its cell in the diagram of the sample
/// restricted to the ball B(p, delta). +inf when that cell has no vertex.
inline double estimate_curvature_local(std::span<const Point> sample, Point p, double delta) {
  if (!(delta > 0)) throw ConfigError("delta must be positive");
  const std::vector<Point> local = restrict_to_ball(sample, p, delta);
  if (local.size() < 4)
    throw TooFewPoints("only " + std::to_string(local.size()) + " sample points within delta of the query point");
  const VoronoiDiagram V = voronoi_from_sites(local);
  int a = 0;
  for (std::size_t i = 1; i < local.size(); ++i)
    if (dist(local[i], p) < dist(local[a], p)) a = static_cast<int>(i);
  double d = std::numeric_limits<double>::infinity();
  for (int v : V.cells[a].vertices) d = std::min(d, dist(V.vertices[v], local[a]));
  return d;
}

/// Default localization radius: 0.9 times the distance from p to the nearest vertex of the full diagram.
inline double default_delta(const VoronoiDiagram& V, Point p) {
  double d = std::numeric_limits<double>::infinity();
  for (const Point& v : V.vertices) d = std::min(d, dist(v, p));
  return 0.9 * d;
}

/// Evolute approximation: vertices of localized diagrams over a cover of the
/// sample by balls centered at sample points (radius = the default delta at each center).
inline std::vector<Point> approximate_evolute(const VoronoiDiagram& V, std::optional<double> delta = std::nullopt) {
  std::vector<Point> out;
  std::vector<char> covered(V.size(), 0);
  for (std::size_t s = 0; s < V.size(); ++s) {
    if (covered[s]) continue;
    const Point p = V.sites[s];
    const double r = delta ? *delta : default_delta(V, p);
    if (!(r > 0) || !std::isfinite(r)) continue;
    std::vector<Point> local;
    for (std::size_t t = 0; t < V.size(); ++t)
      if (dist(V.sites[t], p) <= r) {
        local.push_back(V.sites[t]);
        if (dist(V.sites[t], p) <= r / 2) covered[t] = 1;
      }
    if (local.size() < 3) continue;
    try {
      const VoronoiDiagram L = voronoi_from_sites(local);
      out.insert(out.end(), L.vertices.begin(), L.vertices.end());
    } catch (const DegenerateInput&) {
      continue;  // collinear neighborhood: no vertices
    }
  }
  return out;
}

struct BottleneckCandidate {
  int a = -1, b = -1;  // site indices, a < b
  Point pa, pb;
  double width = 0.0;
  int exit_edge_a = -1;   // edge of Vor(a) crossed by segment ab
  int entry_edge_b = -1;  // edge of Vor(b) crossed by segment ab
};

namespace detail {

// Edge of Vor(a) through which the ray from a towards target leaves the cell.
// Degenerate edges are skipped: they only touch the cell at a vertex.
inline int exit_edge(const VoronoiDiagram& V, int a, Point target) {
  const Point pa = V.sites[a];
  const Point u = target - pa;
  double best = std::numeric_limits<double>::infinity();
  int arg = -1;
  for (int e : V.cells[a].edges) {
    if (V.edges[e].degenerate) continue;
    const Point w = V.sites[V.edges[e].other(a)] - pa;
    const double den = dot(w, u);
    if (den <= 0) continue;
    const double t = 0.5 * norm2(w) / den;
    if (t < best) best = t, arg = e;
  }
  return arg;
}

}  // namespace detail

/// Unordered pairs (a, b) whose joining segment leaves Vor(a) and enters Vor(b)
/// through short edges, sorted by width.
inline std::vector<BottleneckCandidate> bottleneck_candidates(const VoronoiDiagram& V, const EdgeClassification& cls) {
  const std::size_t n = V.size();
  std::vector<char> has_short(n, 0);
  for (std::size_t s = 0; s < n; ++s)
    for (int e : V.cells[s].edges) has_short[s] |= cls.classes[e] == EdgeClass::Short;
  std::vector<std::vector<BottleneckCandidate>> per_site(n);
  parallel_for(n, [&](std::size_t ia) {
    const int a = static_cast<int>(ia);
    if (!has_short[a]) return;
    for (int b = a + 1; b < static_cast<int>(n); ++b) {
      if (!has_short[b]) continue;
      const int ea = detail::exit_edge(V, a, V.sites[b]);
      if (ea < 0 || cls.classes[ea] != EdgeClass::Short) continue;
      const int eb = detail::exit_edge(V, b, V.sites[a]);
      if (eb < 0 || cls.classes[eb] != EdgeClass::Short) continue;
      per_site[a].push_back({a, b, V.sites[a], V.sites[b], dist(V.sites[a], V.sites[b]), ea, eb});
    }
  });
  std::vector<BottleneckCandidate> out;
  for (auto& v : per_site) out.insert(out.end(), v.begin(), v.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.width < y.width; });
  return out;
}

}  // namespace mcl
