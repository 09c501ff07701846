#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mcl/features.hpp"
#include "mcl/sampler.hpp"
#include "../support/oracles.hpp"

using namespace mcl;

namespace {

const char* kButterfly = "x^4 - x^2*y^2 + y^4 - 4*x^2 - 2*y^2 - x - 4*y + 1";
const BoundingBox kBox{-3, 3, -3, 3};

struct Built {
  Sample A;
  VoronoiDiagram V;
  EdgeClassification cls;
};

Built build(const Curve& c, double eps) {
  Built b;
  b.A = epsilon_sample(c, kBox, eps);
  b.V = voronoi_from_sites(b.A.all_points);
  b.cls = classify_edges(b.V, c);
  return b;
}

double angle_deg(Point u, Point v) {
  return std::acos(std::clamp(std::abs(dot(normalized(u), normalized(v))), 0.0, 1.0)) * 180.0 / M_PI;
}

// Point of largest curvature on a dense trace of the (single) component.
Point max_curvature_point(const Curve& c) {
  const auto loop = oracle::dense_loop(c, seed_points(c, kBox).front(), 1e-3);
  Point best = loop.front();
  double kmax = -1;
  for (const Point& p : loop) {
    const double k = curvature(c, p).curvature;
    if (k > kmax) kmax = k, best = p;
  }
  return best;
}

}  // namespace

TEST(Classify, CircleHasOnlyLongEdges) {
  const Curve c = Curve::parse("x^2 + y^2 - 1");
  const Built b = build(c, 0.05);
  EXPECT_EQ(b.cls.count(EdgeClass::Short), 0u);
  EXPECT_TRUE(b.cls.warnings.empty());
  for (int n : b.cls.long_edges) EXPECT_EQ(n, 2);
  const MedialApprox m = medial_axis_short_edges(b.V, b.cls, 0.05);
  EXPECT_TRUE(m.short_edges.empty());
  EXPECT_TRUE(m.short_rays.empty());
  EXPECT_TRUE(bottleneck_candidates(b.V, b.cls).empty());
}

TEST(Classify, EllipseShortEdgesTrackMajorAxisSegment) {
  const Curve c = Curve::parse("x^2 + 4*y^2 - 4");
  const double eps = 0.02;
  const Built b = build(c, eps);
  for (int n : b.cls.long_edges) EXPECT_EQ(n, 2);
  const MedialApprox m = medial_axis_short_edges(b.V, b.cls, eps);
  ASSERT_GT(m.short_edges.size(), 100u);
  EXPECT_TRUE(m.short_rays.empty());  // convex curve: no exterior medial branches
  double worst = 0;
  for (const auto& s : m.short_edges) {
    const Point mid = (s.a + s.b) / 2.0;
    worst = std::max(worst, point_segment_distance(mid, {-1.5, 0}, {1.5, 0}));
  }
  EXPECT_LE(worst, eps);
}

TEST(Classify, EdgesAgreeWithDenseCrossingSearch) {
  const Curve c = Curve::parse(kButterfly);
  const Built b = build(c, 0.1);
  int checked = 0;
  for (std::size_t i = 0; i < b.V.edges.size(); ++i) {
    const VoronoiEdge& e = b.V.edges[i];
    if (e.kind != EdgeKind::Segment || e.degenerate) continue;
    bool crosses = false;
    const int n = 2000;
    double prev = c.value(e.p);
    for (int k = 1; k <= n && !crosses; ++k) {
      const double v = c.value(e.p + (static_cast<double>(k) / n) * (e.q - e.p));
      crosses = (v > 0) != (prev > 0);
      prev = v;
    }
    EXPECT_EQ(b.cls.classes[i] == EdgeClass::Long, crosses) << "edge " << i;
    ++checked;
  }
  EXPECT_GT(checked, 500);
}

TEST(Medial, ShortEdgeMidpointsSatisfyMedialEquations) {
  for (const char* text : {"x^2 + 4*y^2 - 4", kButterfly}) {
    const Curve c = Curve::parse(text);
    const double eps = 0.05;
    const Built b = build(c, eps);
    int checked = 0;
    for (std::size_t i = 0; i < b.V.edges.size(); ++i) {
      const VoronoiEdge& e = b.V.edges[i];
      if (b.cls.classes[i] != EdgeClass::Short || e.kind != EdgeKind::Segment) continue;
      const Point m = (e.p + e.q) / 2.0;
      if (!kBox.contains(m)) continue;
      const Point q1 = nearest_point_on_curve(c, m, b.V.sites[e.a]);
      const Point q2 = nearest_point_on_curve(c, m, b.V.sites[e.b]);
      double r = 0;
      for (double v : medial_residual(c, m, q1, q2)) r = std::max(r, std::abs(v));
      EXPECT_LT(r, 10 * eps * eps) << text << " edge " << i;
      ++checked;
    }
    EXPECT_GT(checked, 50) << text;
  }
}

TEST(Medial, CircleCircumcentersAreTheCenter) {
  const Curve c = Curve::parse("x^2 + y^2 - 1");
  const Sample A = epsilon_sample(c, kBox, 0.05);
  const Triangulation T = delaunay_triangulate(A.all_points);
  const VoronoiDiagram V = voronoi_dual(T);
  const auto cc = medial_axis_circumcenters(T, V);
  ASSERT_EQ(cc.size(), T.size());
  for (const auto& info : cc) {
    EXPECT_LT(norm(info.center), 1e-9);
    EXPECT_NEAR(info.radius, 1.0, 1e-9);
    EXPECT_NEAR(info.nearest_site_distance, 1.0, 1e-9);
  }
}

TEST(Medial, ThreePointSampleHasOneCircumcenter) {
  const std::vector<Point> pts{{0, 0}, {2, 0}, {0, 2}};
  const Triangulation T = delaunay_triangulate(pts);
  const auto cc = medial_axis_circumcenters(T, voronoi_dual(T));
  ASSERT_EQ(cc.size(), 1u);
  EXPECT_NEAR(cc[0].center.x, 1.0, 1e-15);
  EXPECT_NEAR(cc[0].center.y, 1.0, 1e-15);
  EXPECT_NEAR(cc[0].radius, std::sqrt(2.0), 1e-15);
}

TEST(Normal, CircleAndEllipseExamples) {
  {
    const Built b = build(Curve::parse("x^2 + y^2 - 1"), 0.01);
    const int s = oracle::nearest_site(b.V.sites, {1, 0});
    EXPECT_LT(angle_deg(estimate_normal(b.V, s, b.cls), {1, 0}), 1.0);
  }
  {
    const Built b = build(Curve::parse("x^2 + 4*y^2 - 4"), 0.01);
    const int s = oracle::nearest_site(b.V.sites, {0, 1});
    EXPECT_LT(angle_deg(estimate_normal(b.V, s, b.cls), {0, 1}), 1.0);
  }
}

TEST(Normal, ButterflyErrorShrinksWithEpsilon) {
  const Curve c = Curve::parse(kButterfly);
  double prev = INFINITY;
  for (double eps : {0.1, 0.05, 0.025}) {
    const Built b = build(c, eps);
    double worst = 0;
    for (std::size_t s = 0; s < b.V.size(); ++s)
      if (b.cls.long_edges[s] == 2)
        worst = std::max(worst, angle_deg(estimate_normal(b.V, static_cast<int>(s), b.cls), c.gradient(b.V.sites[s])));
    EXPECT_LT(worst, prev) << eps;
    prev = worst;
  }
}

TEST(Normal, RejectsCellsWithoutTwoLongEdges) {
  const Built b = build(Curve::parse("x^2 + y^2 - 1"), 0.1);
  EdgeClassification all_short = b.cls;
  std::fill(all_short.classes.begin(), all_short.classes.end(), EdgeClass::Short);
  EXPECT_THROW(estimate_normal(b.V, 0, all_short), BadCellStructure);
}

TEST(LocalCurvature, CircleRadius) {
  const Sample A = epsilon_sample(Curve::parse("x^2 + y^2 - 1"), kBox, 0.01);
  EXPECT_NEAR(estimate_curvature_local(A.all_points, {1, 0}, 0.5), 1.0, 0.02);
}

TEST(LocalCurvature, EllipseVertexApproachesHalf) {
  const Curve c = Curve::parse("x^2 + 4*y^2 - 4");
  double prev = INFINITY;
  for (double eps : {0.04, 0.02, 0.01}) {
    const Sample A = epsilon_sample(c, kBox, eps);
    const double err = std::abs(estimate_curvature_local(A.all_points, {2, 0}, 0.3) - 0.5);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(LocalCurvature, ButterflyMaximumCurvaturePoint) {
  const Curve c = Curve::parse(kButterfly);
  const Point p = max_curvature_point(c);
  const double r = 1.0 / curvature(c, p).curvature;
  EXPECT_NEAR(r, 0.104, 0.002);
  const Built b = build(c, 0.01);
  const Point site = b.V.sites[oracle::nearest_site(b.V.sites, p)];
  const double est = estimate_curvature_local(b.A.all_points, site, default_delta(b.V, site));
  EXPECT_NEAR(est, r, 0.03 * r);
}

// With the localization radius shrinking like sqrt(eps) the estimate converges
// at every probe, not only at curvature extrema.
TEST(LocalCurvature, ErrorDecreasesOverHalvings) {
  for (const char* text : {"x^2 + 4*y^2 - 4", kButterfly}) {
    const Curve c = Curve::parse(text);
    const Sample coarse = epsilon_sample(c, kBox, 0.1);
    std::vector<Point> probes;
    for (int k = 0; k < 5; ++k) probes.push_back(coarse.all_points[k * coarse.size() / 5]);
    std::vector<double> prev(probes.size(), INFINITY);
    for (double eps : {0.04, 0.02, 0.01, 0.005}) {
      const Sample A = epsilon_sample(c, kBox, eps);
      for (std::size_t k = 0; k < probes.size(); ++k) {
        const Point a = A.all_points[oracle::nearest_site(A.all_points, probes[k])];
        const double est = estimate_curvature_local(A.all_points, a, 0.5 * std::sqrt(eps));
        const double exact = std::abs(curvature(c, a).radius_signed);
        const double err = std::abs(est - exact) / exact;
        EXPECT_LT(err, prev[k]) << text << " probe " << k << " eps " << eps;
        prev[k] = err;
      }
    }
  }
}

TEST(LocalCurvature, TooFewPoints) {
  const std::vector<Point> pts{{0, 0}, {0.1, 0}, {0.2, 0.01}, {5, 5}};
  EXPECT_THROW(estimate_curvature_local(pts, {0, 0}, 0.5), TooFewPoints);
  EXPECT_THROW(estimate_curvature_local(pts, {0, 0}, 0.0), ConfigError);
}

TEST(LocalCurvature, DefaultDeltaIsBelowNearestVertex) {
  const Built b = build(Curve::parse("x^2 + 4*y^2 - 4"), 0.05);
  for (std::size_t s = 0; s < b.V.size(); s += 17) {
    const Point p = b.V.sites[s];
    const double d = default_delta(b.V, p);
    for (const Point& v : b.V.vertices) EXPECT_GT(dist(v, p), d);
  }
}

TEST(Evolute, EllipseVerticesNearAstroid) {
  // Evolute of x^2/4 + y^2 = 1: (2x)^(2/3) + y^(2/3) = 3^(2/3).
  const Built b = build(Curve::parse("x^2 + 4*y^2 - 4"), 0.02);
  const auto ev = approximate_evolute(b.V);
  ASSERT_GT(ev.size(), 100u);
  std::vector<double> dev;
  for (const Point& p : ev) dev.push_back(std::abs(std::cbrt(4 * p.x * p.x) + std::cbrt(p.y * p.y) - std::cbrt(9.0)));
  std::sort(dev.begin(), dev.end());
  EXPECT_LT(dev[dev.size() / 2], 0.05);
}

TEST(Candidates, CircleHasNone) {
  const Built b = build(Curve::parse("x^2 + y^2 - 1"), 0.02);
  EXPECT_TRUE(bottleneck_candidates(b.V, b.cls).empty());
}

// Only the minor axis shows up. At a vertex of the ellipse the site's cell is a
// wedge bounded by two long edges whose apex is the center of curvature, so the
// major-axis line never leaves it through a short edge.
TEST(Candidates, EllipseMinorAxis) {
  const Built b = build(Curve::parse("x^2 + 4*y^2 - 4"), 0.02);
  const auto cands = bottleneck_candidates(b.V, b.cls);
  ASSERT_FALSE(cands.empty());
  EXPECT_NEAR(cands.front().width, 2.0, 0.01);
  for (const auto& bc : cands) {
    EXPECT_NEAR(bc.width, 2.0, 0.01);
    EXPECT_NEAR(std::abs(bc.pa.y), 1.0, 0.01);
  }
}

TEST(Candidates, StructureAndSymmetry) {
  const Built b = build(Curve::parse(kButterfly), 0.05);
  const auto cands = bottleneck_candidates(b.V, b.cls);
  ASSERT_FALSE(cands.empty());
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto& bc = cands[i];
    EXPECT_LT(bc.a, bc.b);
    EXPECT_TRUE(seen.insert({bc.a, bc.b}).second);
    EXPECT_EQ(b.cls.classes[bc.exit_edge_a], EdgeClass::Short);
    EXPECT_EQ(b.cls.classes[bc.entry_edge_b], EdgeClass::Short);
    // The referenced edges bound the right cells and are met by segment ab.
    const VoronoiEdge& ea = b.V.edges[bc.exit_edge_a];
    const VoronoiEdge& eb = b.V.edges[bc.entry_edge_b];
    EXPECT_TRUE(ea.a == bc.a || ea.b == bc.a);
    EXPECT_TRUE(eb.a == bc.b || eb.b == bc.b);
    EXPECT_DOUBLE_EQ(bc.width, dist(bc.pa, bc.pb));
    if (i > 0) {
      EXPECT_LE(cands[i - 1].width, bc.width);
    }
    // Swapping the roles yields the same pair.
    EXPECT_EQ(detail::exit_edge(b.V, bc.b, bc.pa), bc.entry_edge_b);
  }
}

TEST(Candidates, ButterflyNarrowestNearBottleneck) {
  const Built b = build(Curve::parse(kButterfly), 0.0125);
  const auto cands = bottleneck_candidates(b.V, b.cls);
  ASSERT_FALSE(cands.empty());
  EXPECT_NEAR(cands.front().width, 0.503, 0.02);
}
