#pragma once

// SVG output. World coordinates map to a fixed-width canvas with y pointing up;
// unbounded Voronoi edges are clipped to the render box here and nowhere else.

#include <algorithm>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mcl/errors.hpp"
#include "mcl/features.hpp"
#include "mcl/reach.hpp"
#include "mcl/sampler.hpp"
#include "mcl/solver.hpp"

namespace mcl {

class SvgCanvas {
 public:
  explicit SvgCanvas(const BoundingBox& box, double width_px = 800) : box_(box), s_(width_px / box.width()) {}

  const BoundingBox& box() const noexcept { return box_; }

  void begin_group(const std::string& id, const std::string& style) {
    body_ << "<g id=\"" << id << "\" " << style << ">\n";
  }
  void end_group() { body_ << "</g>\n"; }

  void segment(Point a, Point b) {
    if (!clip_segment(a, b, box_)) return;
    body_ << "<line x1=\"" << fx(a) << "\" y1=\"" << fy(a) << "\" x2=\"" << fx(b) << "\" y2=\"" << fy(b) << "\"/>\n";
  }
  void ray(Point origin, Point dir) {
    const double t = ray_exit_parameter(origin, dir, box_);
    if (t < 0) return;
    segment(origin, origin + t * dir);
  }
  void line(Point p, Point dir) {
    ray(p, dir);
    ray(p, -1.0 * dir);
  }
  void edge(const VoronoiEdge& e) {
    switch (e.kind) {
      case EdgeKind::Segment: segment(e.p, e.q); break;
      case EdgeKind::Ray: ray(e.p, e.dir); break;
      case EdgeKind::Line: line(e.p, e.dir); break;
    }
  }
  void polyline(const std::vector<Point>& pts, bool closed) {
    if (pts.size() < 2) return;
    body_ << (closed ? "<polygon" : "<polyline") << " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ << (i ? " " : "") << fx(pts[i]) << ',' << fy(pts[i]);
    body_ << "\"/>\n";
  }
  // A dot of fixed pixel radius.
  void dot(Point p, double r_px) {
    if (!box_.contains(p)) return;
    body_ << "<circle cx=\"" << fx(p) << "\" cy=\"" << fy(p) << "\" r=\"" << fmt(r_px) << "\"/>\n";
  }
  // A circle of world radius r.
  void circle(Point c, double r) {
    body_ << "<circle cx=\"" << fx(c) << "\" cy=\"" << fy(c) << "\" r=\"" << fmt(r * s_) << "\"/>\n";
  }

  std::string str() const {
    std::ostringstream os;
    const double w = box_.width() * s_, h = box_.height() * s_;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
       << "\" viewBox=\"0 0 " << fmt(w) << ' ' << fmt(h) << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << body_.str() << "</svg>\n";
    return os.str();
  }

 private:
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
  }
  std::string fx(Point p) const { return fmt((p.x - box_.xmin) * s_); }
  std::string fy(Point p) const { return fmt((box_.ymax - p.y) * s_); }

  BoundingBox box_;
  double s_;
  std::ostringstream body_;
};

inline const std::vector<std::string>& render_layer_names() {
  static const std::vector<std::string> names{"curve",     "delaunay",   "voronoi",     "medial",   "evolute",
                                              "triangles", "candidates", "bottlenecks", "critical", "sample"};
  return names;
}

struct RenderOptions {
  std::vector<std::string> layers{"curve", "sample", "voronoi"};
  std::optional<double> delta;  // ball radius for the evolute layer
  int tracked_triangles = 2;
};

/// Draws the requested layers, bottom to top in the order of render_layer_names().
/// Voronoi edges are colored by class: short edges blue, long edges grey.
inline std::string render_svg(const Curve& c, const Sample& A, const BoundingBox& box, const RenderOptions& opt = {}) {
  const std::set<std::string> want(opt.layers.begin(), opt.layers.end());
  for (const std::string& l : want)
    if (std::find(render_layer_names().begin(), render_layer_names().end(), l) == render_layer_names().end())
      throw ConfigError("unknown render layer '" + l + "'");
  auto has = [&](const char* l) { return want.count(l) > 0; };

  SvgCanvas svg(box);

  std::optional<Triangulation> T;
  std::optional<VoronoiDiagram> V;
  std::optional<EdgeClassification> cls;
  if (has("voronoi") || has("delaunay") || has("medial") || has("evolute") || has("candidates") || has("triangles")) {
    T = delaunay_triangulate(A.all_points);
    V = voronoi_dual(*T);
    cls = classify_edges(*V, c);
    apply_classes(*V, *cls);
  }

  if (has("curve")) {
    // A much finer sample stands in for the curve itself.
    const Sample fine = epsilon_sample(c, box, box.diagonal() / 2000, A.singular_points);
    svg.begin_group("curve", "fill=\"none\" stroke=\"#7b2d8e\" stroke-width=\"2\"");
    for (const Component& comp : fine.components) svg.polyline(comp.points, comp.closed);
    svg.end_group();
  }
  if (has("delaunay")) {
    svg.begin_group("delaunay", "fill=\"none\" stroke=\"#e07b39\" stroke-width=\"0.6\"");
    for (const auto& t : T->triangles)
      for (int k = 0; k < 3; ++k) svg.segment(T->sites[t[k]], T->sites[t[(k + 1) % 3]]);
    svg.end_group();
  }
  if (has("voronoi")) {
    svg.begin_group("voronoi-long", "stroke=\"#9a9a9a\" stroke-width=\"0.6\"");
    for (const VoronoiEdge& e : V->edges)
      if (e.cls != EdgeClass::Short) svg.edge(e);
    svg.end_group();
    svg.begin_group("voronoi-short", "stroke=\"#1f5fbf\" stroke-width=\"0.8\"");
    for (const VoronoiEdge& e : V->edges)
      if (e.cls == EdgeClass::Short) svg.edge(e);
    svg.end_group();
  }
  if (has("medial")) {
    const MedialApprox m = medial_axis_short_edges(*V, *cls, A.epsilon);
    svg.begin_group("medial", "stroke=\"#35a7d6\" stroke-width=\"1.5\"");
    for (const Segment& s : m.short_edges) svg.segment(s.a, s.b);
    for (const Ray& r : m.short_rays) svg.ray(r.origin, r.dir);
    svg.end_group();
  }
  if (has("evolute")) {
    svg.begin_group("evolute", "fill=\"#2e8b57\"");
    for (const Point& p : approximate_evolute(*V, opt.delta)) svg.dot(p, 1.2);
    svg.end_group();
  }
  if (has("triangles")) {
    svg.begin_group("triangles", "fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.2\"");
    for (const auto& t : largest_triangles(*T, opt.tracked_triangles)) {
      svg.polyline({t[0], t[1], t[2]}, true);
      const Circle circ = circumcircle(t[0], t[1], t[2]);
      svg.circle(circ.center, circ.radius);
    }
    svg.end_group();
  }
  if (has("candidates")) {
    svg.begin_group("candidates", "stroke=\"#d4a017\" stroke-width=\"1.5\"");
    for (const BottleneckCandidate& b : bottleneck_candidates(*V, *cls)) svg.segment(b.pa, b.pb);
    svg.end_group();
  }
  if (has("bottlenecks")) {
    const BottleneckResult r = real_bottlenecks(c, A);
    svg.begin_group("bottlenecks", "stroke=\"#117a65\" stroke-width=\"1.2\"");
    for (const BottleneckPair& p : r.pairs) svg.segment(p.x, p.y);
    svg.end_group();
  }
  if (has("critical")) {
    const CriticalCurvatureResult r = curvature_extrema(c, A);
    svg.begin_group("critical", "fill=\"none\" stroke=\"#b03060\" stroke-width=\"1\"");
    for (const CriticalPoint& p : r.points) {
      svg.dot(p.p, 3);
      const CurvatureData k = curvature(c, p.p);
      if (k.center) svg.circle(*k.center, p.radius);  // osculating circle
    }
    svg.end_group();
  }
  if (has("sample")) {
    svg.begin_group("sample", "fill=\"#d62728\"");
    for (const Point& p : A.all_points) svg.dot(p, 1.8);
    svg.end_group();
  }
  return svg.str();
}

}  // namespace mcl
