#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "mcl/delaunay.hpp"
#include "mcl/errors.hpp"
#include "mcl/geometry.hpp"

namespace mcl {

enum class EdgeKind { Segment, Ray, Line };
enum class EdgeClass { Unclassified, Short, Long };

inline const char* to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Segment: return "segment";
    case EdgeKind::Ray: return "ray";
    case EdgeKind::Line: return "line";
  }
  return "?";
}

inline const char* to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::Unclassified: return "unclassified";
    case EdgeClass::Short: return "short";
    case EdgeClass::Long: return "long";
  }
  return "?";
}

struct VoronoiEdge {
  int a = -1, b = -1;  // the two sites whose bisector carries the edge
  EdgeKind kind = EdgeKind::Segment;
  Point p;    // segment start, ray origin, or a point on the line
  Point q;    // segment end
  Point dir;  // unit direction for rays and lines
  int v0 = -1, v1 = -1;  // diagram vertices (triangle indices); v1 = -1 for rays and lines
  // Zero-length segment between coincident circumcenters (cocircular sites).
  bool degenerate = false;
  EdgeClass cls = EdgeClass::Unclassified;

  int other(int s) const noexcept { return s == a ? b : a; }
  double distance(Point x) const noexcept {
    switch (kind) {
      case EdgeKind::Segment: return point_segment_distance(x, p, q);
      case EdgeKind::Ray: return point_ray_distance(x, p, dir);
      case EdgeKind::Line: return point_line_distance(x, p, dir);
    }
    return std::numeric_limits<double>::infinity();
  }
};

struct VoronoiCell {
  std::vector<int> edges;     // boundary edges, counter-clockwise around the site
  std::vector<int> vertices;  // diagram vertices, counter-clockwise
  bool bounded = true;
};

struct VoronoiDiagram {
  std::vector<Point> sites;
  std::vector<Point> vertices;  // vertex i is the circumcenter of Delaunay triangle i
  std::vector<VoronoiEdge> edges;
  std::vector<VoronoiCell> cells;
  double scale = 1.0;  // diagonal of the sites' bounding box

  std::size_t size() const noexcept { return sites.size(); }

  // Voronoi neighbors of a site (one per boundary edge, in boundary order).
  std::vector<int> neighbors(int s) const {
    std::vector<int> out;
    for (int e : cells[s].edges) out.push_back(edges[e].other(s));
    return out;
  }

  bool contains(int s, Point x) const {
    const double ds = norm2(x - sites[s]);
    for (int e : cells[s].edges)
      if (norm2(x - sites[edges[e].other(s)]) < ds) return false;
    return true;
  }

  // Euclidean distance from x to the closed cell (0 inside).
  double cell_distance(int s, Point x) const {
    if (contains(s, x)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int e : cells[s].edges) best = std::min(best, edges[e].distance(x));
    return best;
  }

  std::vector<Point> cell_polygon(int s) const {
    std::vector<Point> out;
    for (int v : cells[s].vertices) out.push_back(vertices[v]);
    return out;
  }

  double cell_diameter(int s) const {
    if (!cells[s].bounded) return std::numeric_limits<double>::infinity();
    double d = 0.0;
    const auto poly = cell_polygon(s);
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (std::size_t j = i + 1; j < poly.size(); ++j) d = std::max(d, dist(poly[i], poly[j]));
    return d;
  }

  // Site whose cell contains x, by greedy descent over the Delaunay graph
  // (a site that is not nearest always has a strictly closer neighbor).
  int locate(Point x, int hint = 0) const {
    int s = std::clamp(hint, 0, static_cast<int>(sites.size()) - 1);
    double ds = norm2(x - sites[s]);
    for (;;) {
      int next = -1;
      for (int e : cells[s].edges) {
        const int n = edges[e].other(s);
        const double dn = norm2(x - sites[n]);
        if (dn < ds) ds = dn, next = n;
      }
      if (next < 0) return s;
      s = next;
    }
  }
};

namespace detail {

inline double site_scale(std::span<const Point> sites) {
  const BoundingBox box = BoundingBox::of(sites);
  return std::max(box.diagonal(), std::numeric_limits<double>::min());
}

inline constexpr double kDegenerateEdgeRel = 1e-9;

}  // namespace detail

/// The Voronoi diagram dual to a Delaunay triangulation.
inline VoronoiDiagram voronoi_dual(const Triangulation& T) {
  VoronoiDiagram V;
  V.sites = T.sites;
  V.scale = detail::site_scale(T.sites);
  V.vertices.reserve(T.size());
  for (const Circle& c : T.circumdata) V.vertices.push_back(c.center);

  std::vector<std::array<int, 3>> edge_of(T.size(), {-1, -1, -1});
  for (int t = 0; t < static_cast<int>(T.size()); ++t) {
    for (int k = 0; k < 3; ++k) {
      if (edge_of[t][k] >= 0) continue;
      const int p = T.triangles[t][(k + 1) % 3], q = T.triangles[t][(k + 2) % 3];
      const int u = T.neighbors[t][k];
      VoronoiEdge e;
      e.a = std::min(p, q), e.b = std::max(p, q);
      e.p = V.vertices[t];
      e.v0 = t;
      if (u == Triangulation::kHull) {
        const Point d = T.sites[q] - T.sites[p];
        e.kind = EdgeKind::Ray;
        e.dir = normalized(Point{d.y, -d.x});
      } else {
        e.kind = EdgeKind::Segment;
        e.q = V.vertices[u];
        e.v1 = u;
        e.degenerate = dist(e.p, e.q) <= detail::kDegenerateEdgeRel * V.scale;
      }
      const int id = static_cast<int>(V.edges.size());
      V.edges.push_back(e);
      edge_of[t][k] = id;
      if (u != Triangulation::kHull)
        for (int j = 0; j < 3; ++j)
          if (T.neighbors[u][j] == t) edge_of[u][j] = id;
    }
  }

  std::vector<int> incident(T.sites.size(), -1);
  for (int t = 0; t < static_cast<int>(T.size()); ++t)
    for (int v : T.triangles[t]) incident[v] = t;

  V.cells.resize(T.sites.size());
  for (int s = 0; s < static_cast<int>(T.sites.size()); ++s) {
    VoronoiCell& cell = V.cells[s];
    int t = incident[s];
    if (t < 0) continue;
    // Rotate clockwise to the first triangle, or all the way round for an interior site.
    const int t_start = t;
    for (;;) {
      const int i = T.local_index(t, s);
      const int prev = T.neighbors[t][(i + 2) % 3];
      if (prev == Triangulation::kHull) {
        cell.bounded = false;
        break;
      }
      t = prev;
      if (t == t_start) break;
    }
    const int first = t;
    if (!cell.bounded) cell.edges.push_back(edge_of[t][(T.local_index(t, s) + 2) % 3]);
    for (;;) {
      const int i = T.local_index(t, s);
      cell.vertices.push_back(t);
      cell.edges.push_back(edge_of[t][(i + 1) % 3]);
      const int next = T.neighbors[t][(i + 1) % 3];
      if (next == Triangulation::kHull || next == first) break;
      t = next;
    }
  }
  return V;
}

/// Voronoi diagram of arbitrary distinct sites, including the cases without
/// a triangulation (one or two sites, or all sites on a line).
inline VoronoiDiagram voronoi_from_sites(std::span<const Point> sites) {
  if (sites.empty()) throw DegenerateInput("Voronoi diagram of an empty site set");
  std::vector<Point> sorted(sites.begin(), sites.end());
  std::sort(sorted.begin(), sorted.end(), lex_less);
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw DegenerateInput("duplicate sites");

  bool collinear = true;
  for (std::size_t i = 2; i < sites.size() && collinear; ++i)
    collinear = predicates::orient(sites[0], sites[1], sites[i]) == 0;
  if (sites.size() >= 3 && !collinear) return voronoi_dual(delaunay_triangulate(sites));

  VoronoiDiagram V;
  V.sites.assign(sites.begin(), sites.end());
  V.scale = detail::site_scale(sites);
  V.cells.resize(sites.size());
  for (auto& c : V.cells) c.bounded = false;
  if (sites.size() == 1) return V;
  // Sites on a line: consecutive ones are separated by parallel bisector lines.
  std::vector<int> order(sites.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return lex_less(sites[i], sites[j]); });
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const int a = order[i], b = order[i + 1];
    VoronoiEdge e;
    e.a = std::min(a, b), e.b = std::max(a, b);
    e.kind = EdgeKind::Line;
    e.p = (sites[a] + sites[b]) / 2.0;
    e.dir = normalized(perp(sites[b] - sites[a]));
    const int id = static_cast<int>(V.edges.size());
    V.edges.push_back(e);
    V.cells[a].edges.push_back(id);
    V.cells[b].edges.push_back(id);
  }
  return V;
}

inline VoronoiDiagram voronoi_from_sites(const std::vector<Point>& sites) {
  return voronoi_from_sites(std::span<const Point>(sites));
}

}  // namespace mcl
