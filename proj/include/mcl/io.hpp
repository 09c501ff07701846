#pragma once

// JSON and CSV serialization. Every JSON document carries "schema" and
// "version" keys matching a schema file under docs/schemas/. Non-finite
// numbers are written as null.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcl/errors.hpp"
#include "mcl/features.hpp"
#include "mcl/reach.hpp"
#include "mcl/sampler.hpp"
#include "mcl/solver.hpp"

namespace mcl::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0.0";

inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
inline json point(Point p) { return json::array({number(p.x), number(p.y)}); }

inline json points(const std::vector<Point>& ps) {
  json a = json::array();
  for (const Point& p : ps) a.push_back(point(p));
  return a;
}

inline json box(const BoundingBox& b) { return json::array({b.xmin, b.xmax, b.ymin, b.ymax}); }

inline json header(const char* schema) {
  json j;
  j["schema"] = schema;
  j["version"] = kSchemaVersion;
  return j;
}

inline Point read_point(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError("expected a point [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

// ---------------------------------------------------------------------------
// Sample

inline json sample_json(const Sample& A, const std::string& curve) {
  json j = header("mcl.sample");
  j["curve"] = curve;
  j["epsilon"] = A.epsilon;
  j["box"] = box(A.box);
  j["components"] = json::array();
  j["closed"] = json::array();
  for (const Component& c : A.components) {
    j["components"].push_back(points(c.points));
    j["closed"].push_back(c.closed);
  }
  j["singular"] = points(A.singular_points);
  j["size"] = A.size();
  j["warnings"] = A.warnings;
  return j;
}

inline Sample sample_from_json(const json& j) {
  if (j.value("schema", "") != "mcl.sample") throw ConfigError("not a sample document");
  Sample A;
  A.epsilon = j.at("epsilon").get<double>();
  const auto& b = j.at("box");
  A.box = {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(), b.at(3).get<double>()};
  const auto& comps = j.at("components");
  const auto& closed = j.at("closed");
  if (comps.size() != closed.size()) throw ConfigError("components and closed flags differ in length");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    Component c;
    c.closed = closed[i].get<bool>();
    for (const auto& p : comps[i]) c.points.push_back(read_point(p));
    A.components.push_back(std::move(c));
  }
  for (const auto& p : j.at("singular")) A.singular_points.push_back(read_point(p));
  if (j.contains("warnings")) A.warnings = j["warnings"].get<std::vector<std::string>>();
  detail::assemble_points(A);
  return A;
}

inline std::string sample_csv(const Sample& A) {
  std::ostringstream os;
  os.precision(17);
  os << "component,x,y\n";
  for (std::size_t i = 0; i < A.components.size(); ++i)
    for (const Point& p : A.components[i].points) os << i << ',' << p.x << ',' << p.y << '\n';
  for (const Point& p : A.singular_points) os << "singular," << p.x << ',' << p.y << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Delaunay / Voronoi

inline json edge_json(const VoronoiEdge& e) {
  json j;
  j["sites"] = json::array({e.a, e.b});
  j["kind"] = to_string(e.kind);
  if (e.kind == EdgeKind::Segment) {
    j["from"] = point(e.p);
    j["to"] = point(e.q);
  } else {
    j["origin"] = point(e.p);
    j["direction"] = point(e.dir);
  }
  j["class"] = to_string(e.cls);
  j["degenerate"] = e.degenerate;
  return j;
}

inline json diagram_json(const Triangulation& T, const VoronoiDiagram& V, const std::string& curve, double epsilon) {
  json j = header("mcl.diagram");
  j["curve"] = curve;
  j["epsilon"] = epsilon;
  j["sites"] = points(T.sites);
  j["triangles"] = json::array();
  for (std::size_t t = 0; t < T.size(); ++t) {
    json tri;
    tri["vertices"] = json::array({T.triangles[t][0], T.triangles[t][1], T.triangles[t][2]});
    tri["center"] = point(T.circumdata[t].center);
    tri["radius"] = number(T.circumdata[t].radius);
    j["triangles"].push_back(std::move(tri));
  }
  j["edges"] = json::array();
  for (const VoronoiEdge& e : V.edges) j["edges"].push_back(edge_json(e));
  j["cells"] = json::array();
  for (const VoronoiCell& c : V.cells) j["cells"].push_back({{"edges", c.edges}, {"bounded", c.bounded}});
  return j;
}

// ---------------------------------------------------------------------------
// Features

struct FeatureReport {
  std::string curve;
  double epsilon = 0.0;
  std::optional<double> delta;  // fixed ball radius, or the per-site default
  std::vector<Point> sites;
  std::vector<VoronoiEdge> edges;
  std::vector<int> long_edges;
  MedialApprox medial;
  std::vector<BottleneckCandidate> candidates;
  std::vector<double> curvature_radius;  // per site
  std::vector<Point> evolute;
  std::vector<std::string> warnings;
};

inline FeatureReport compute_features(const Curve& c, const Sample& A, const std::string& curve,
                                      std::optional<double> delta = std::nullopt) {
  FeatureReport r;
  r.curve = curve;
  r.epsilon = A.epsilon;
  r.delta = delta;
  VoronoiDiagram V = voronoi_from_sites(A.all_points);
  const EdgeClassification cls = classify_edges(V, c);
  apply_classes(V, cls);
  r.sites = V.sites;
  r.edges = V.edges;
  r.long_edges = cls.long_edges;
  r.medial = medial_axis_short_edges(V, cls, A.epsilon);
  r.candidates = bottleneck_candidates(V, cls);
  r.curvature_radius.resize(V.size());
  parallel_for(V.size(), [&](std::size_t s) {
    const Point p = V.sites[s];
    r.curvature_radius[s] = estimate_curvature_local(A.all_points, p, delta ? *delta : default_delta(V, p));
  });
  r.evolute = approximate_evolute(V, delta);
  r.warnings = A.warnings;
  r.warnings.insert(r.warnings.end(), cls.warnings.begin(), cls.warnings.end());
  return r;
}

inline json features_json(const FeatureReport& r) {
  json j = header("mcl.features");
  j["curve"] = r.curve;
  j["epsilon"] = r.epsilon;
  j["delta"] = r.delta ? json(*r.delta) : json(nullptr);
  j["sites"] = points(r.sites);
  j["edges"] = json::array();
  for (const VoronoiEdge& e : r.edges) j["edges"].push_back(edge_json(e));
  j["long_edges"] = r.long_edges;
  json m;
  m["segments"] = json::array();
  for (const Segment& s : r.medial.short_edges) m["segments"].push_back(json::array({point(s.a), point(s.b)}));
  m["rays"] = json::array();
  for (const Ray& ray : r.medial.short_rays) m["rays"].push_back({{"origin", point(ray.origin)}, {"direction", point(ray.dir)}});
  m["circumcenters"] = points(r.medial.circumcenters);
  j["medial"] = std::move(m);
  j["candidates"] = json::array();
  for (const BottleneckCandidate& c : r.candidates)
    j["candidates"].push_back({{"sites", json::array({c.a, c.b})},
                               {"points", json::array({point(c.pa), point(c.pb)})},
                               {"width", c.width}});
  j["curvature_radius"] = json::array();
  for (double v : r.curvature_radius) j["curvature_radius"].push_back(number(v));
  j["evolute"] = points(r.evolute);
  j["warnings"] = r.warnings;
  return j;
}

// ---------------------------------------------------------------------------
// Solver

inline json critical_json(const CriticalCurvatureResult& r) {
  json j;
  j["points"] = json::array();
  for (const CriticalPoint& p : r.points)
    j["points"].push_back({{"point", point(p.p)},
                           {"radius", number(p.radius)},
                           {"curvature", number(p.curvature)},
                           {"residual_f", p.residual_f},
                           {"residual_g", p.residual_g}});
  j["count"] = r.points.size();
  j["q"] = number(r.q);
  j["max_curvature"] = number(r.max_curvature);
  j["constant_curvature"] = r.constant_curvature;
  j["stable"] = r.stable;
  j["epsilon"] = r.epsilon;
  j["degree_bound"] = r.degree_bound;
  j["warnings"] = r.warnings;
  return j;
}

inline json pair_json(const BottleneckPair& p) {
  return {{"x", point(p.x)}, {"y", point(p.y)}, {"width", number(p.width)}, {"residual", p.residual_norm}};
}

inline json bottleneck_json(const BottleneckResult& r) {
  json j;
  j["pairs"] = json::array();
  for (const BottleneckPair& p : r.pairs) j["pairs"].push_back(pair_json(p));
  j["families"] = json::array();
  for (const BottleneckPair& p : r.families) j["families"].push_back(pair_json(p));
  j["count"] = r.pairs.size();
  j["rho"] = number(r.rho);
  j["degree_bound"] = r.degree_bound;
  j["seeds"] = r.seeds;
  j["converged_seeds"] = r.converged_seeds;
  j["warnings"] = r.warnings;
  return j;
}

inline json solve_json(const std::string& curve, const std::optional<CriticalCurvatureResult>& crit,
                       const std::optional<BottleneckResult>& bott, const std::vector<Point>& singular) {
  json j = header("mcl.solve");
  j["curve"] = curve;
  j["critical_curvature"] = crit ? critical_json(*crit) : json(nullptr);
  j["bottlenecks"] = bott ? bottleneck_json(*bott) : json(nullptr);
  j["singular_points"] = points(singular);
  return j;
}

// ---------------------------------------------------------------------------
// Reach

inline json reach_json(const ReachReport& r, const std::string& curve) {
  json j = header("mcl.reach");
  j["curve"] = curve;
  j["epsilon"] = r.epsilon;
  j["sample_size"] = r.sample_size;
  j["q"] = number(r.q);
  j["rho"] = number(r.rho);
  j["tau"] = number(r.tau_exact);
  j["tau_voronoi"] = number(r.tau_voronoi);
  j["tau_delaunay"] = number(r.tau_delaunay);
  json v;
  v["curvature_bound"] = number(r.voronoi.curvature_bound);
  v["bottleneck_bound"] = number(r.voronoi.bottleneck_bound);
  v["candidates"] = r.voronoi.candidates;
  v["narrowest_width"] = r.voronoi.narrowest ? number(r.voronoi.narrowest->width) : json(nullptr);
  j["voronoi"] = std::move(v);
  j["critical_curvature"] = critical_json(r.critical);
  j["bottlenecks"] = bottleneck_json(r.bottlenecks);
  j["warnings"] = r.warnings;
  return j;
}

// ---------------------------------------------------------------------------
// Convergence table

inline json convergence_json(const std::vector<ConvergenceRow>& rows, const std::string& curve,
                             const std::vector<Point>& probes) {
  json j = header("mcl.convergence");
  j["curve"] = curve;
  j["probes"] = points(probes);
  j["rows"] = json::array();
  for (const ConvergenceRow& r : rows) {
    json row;
    row["epsilon"] = r.epsilon;
    row["sample_size"] = r.sample_size;
    row["tracked_site"] = point(r.tracked_site);
    row["triangles"] = json::array();
    for (const auto& t : r.triangles) row["triangles"].push_back(points({t[0], t[1], t[2]}));
    json metrics = json::object();
    for (const auto& [name, value] : r.metrics()) metrics[name] = number(value);
    row["metrics"] = std::move(metrics);
    j["rows"].push_back(std::move(row));
  }
  return j;
}

inline std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "epsilon,sample_size";
  if (!rows.empty())
    for (const auto& [name, value] : rows.front().metrics()) os << ',' << name;
  os << '\n';
  for (const ConvergenceRow& r : rows) {
    os << r.epsilon << ',' << r.sample_size;
    for (const auto& [name, value] : r.metrics()) {
      os << ',';
      if (std::isfinite(value)) os << value;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace mcl::io
