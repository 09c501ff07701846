#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mcl/sampler.hpp"
#include "../support/oracles.hpp"

using namespace mcl;

namespace {

const char* kButterfly = "x^4 - x^2*y^2 + y^4 - 4*x^2 - 2*y^2 - x - 4*y + 1";

double max_chord(const std::vector<Point>& pts, bool closed) {
  double m = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) m = std::max(m, dist(pts[i], pts[i + 1]));
  if (closed && pts.size() > 1) m = std::max(m, dist(pts.back(), pts.front()));
  return m;
}

// Every point of a dense reference set has a sample point within eps.
double covering_radius(const std::vector<Point>& dense, const std::vector<Point>& sample) {
  double worst = 0;
  for (const Point& d : dense) {
    double best = INFINITY;
    for (const Point& a : sample) best = std::min(best, dist(a, d));
    worst = std::max(worst, best);
  }
  return worst;
}

// Marching-squares crossing set: grid nodes on the curve plus grid edges whose
// endpoints have strictly opposite signs.
int crossing_edges(const Curve& c, const BoundingBox& box, int n) {
  auto at = [&](int i, int j) {
    const Point p{box.xmin + box.width() * i / n, box.ymin + box.height() * j / n};
    const double v = c.value(p);
    return c.on_curve(p) ? 0 : (v > 0 ? 1 : -1);
  };
  int count = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      if (at(i, j) == 0) {
        ++count;
        continue;
      }
      if (i < n && at(i, j) * at(i + 1, j) < 0) ++count;
      if (j < n && at(i, j) * at(i, j + 1) < 0) ++count;
    }
  return count;
}

}  // namespace

TEST(Seeds, Circle) {
  const Curve c = Curve::parse("x^2 + y^2 - 1");
  const auto seeds = seed_points(c, {-2, 2, -2, 2}, 32);
  EXPECT_GE(seeds.size(), 4u);
  EXPECT_EQ(static_cast<int>(seeds.size()), crossing_edges(c, {-2, 2, -2, 2}, 32));
  for (const Point& p : seeds) EXPECT_TRUE(c.on_curve(p));
}

TEST(Seeds, Errors) {
  EXPECT_THROW(seed_points(Curve::parse("x^2 + y^2 + 1"), {-3, 3, -3, 3}, 64), NoRealPoints);
  EXPECT_THROW(seed_points(Curve::parse("x^2 + y^2 - 1"), {-3, 3, -3, 3}, 4), ConfigError);
}

TEST(Seeds, ButterflyMatchesMarchingSquaresAndLieOnTheLoop) {
  const Curve b = Curve::parse(kButterfly);
  const BoundingBox box{-3, 3, -3, 3};
  const auto seeds = seed_points(b, box, 64);
  EXPECT_EQ(static_cast<int>(seeds.size()), crossing_edges(b, box, 64));
  const auto loop = oracle::dense_loop(b, oracle::bisect_on_segment(b, {0, 0.5}, {3, 0.5}), 1e-3);
  for (const Point& s : seeds) {
    EXPECT_TRUE(b.on_curve(s));
    double best = INFINITY;
    for (const Point& q : loop) best = std::min(best, dist(q, s));
    EXPECT_LT(best, 1e-3);
  }
}

TEST(Trace, CircleClosesWithBoundedChords) {
  const Curve c = Curve::parse("x^2 + y^2 - 1");
  const auto pts = trace_component(c, {1, 0}, 0.1, {-2, 2, -2, 2});
  EXPECT_GE(pts.size(), 63u);
  EXPECT_LE(max_chord(pts, true), 0.1);
  EXPECT_EQ(pts.front(), (Point{1, 0}));
  for (const Point& p : pts) EXPECT_TRUE(c.on_curve(p));
}

TEST(Trace, Ellipse) {
  const Curve e = Curve::parse("(1/4)*x^2 + y^2 - 1");
  const auto pts = trace_component(e, {0, 1}, 0.05, {-3, 3, -3, 3});
  EXPECT_LE(max_chord(pts, true), 0.05);
  // One loop: the polygon's winding number around the origin is 1.
  double angle = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point a = pts[i], b = pts[(i + 1) % pts.size()];
    angle += std::atan2(cross(a, b), dot(a, b));
  }
  EXPECT_NEAR(std::abs(angle), 2 * M_PI, 1e-9);
}

TEST(Trace, CuspAndBoxExit) {
  const Curve cusp = Curve::parse("y^2 - x^3");
  EXPECT_THROW(trace_component(cusp, {1, 1}, 0.05, {-2, 2, -2, 2}), SingularEncounter);
  const Curve line = Curve::parse("y - x");
  EXPECT_THROW(trace_component(line, {0, 0}, 0.05, {-1, 1, -1, 1}), BoxExit);
}

TEST(Sample, CircleCovering) {
  const Curve c = Curve::parse("x^2 + y^2 - 1");
  const Sample s = epsilon_sample(c, {-2, 2, -2, 2}, 0.1);
  ASSERT_EQ(s.components.size(), 1u);
  EXPECT_TRUE(s.components[0].closed);
  std::vector<Point> dense;
  for (int i = 0; i < 20 * 64; ++i) dense.push_back({std::cos(2 * M_PI * i / 1280), std::sin(2 * M_PI * i / 1280)});
  EXPECT_LE(covering_radius(dense, s.all_points), 0.1);
}

TEST(Sample, ButterflyCoveringSpacingDeterminism) {
  const Curve b = Curve::parse(kButterfly);
  const BoundingBox box{-3, 3, -3, 3};
  for (double eps : {0.2, 0.05}) {
    const Sample s = epsilon_sample(b, box, eps);
    ASSERT_EQ(s.components.size(), 1u) << eps;
    EXPECT_TRUE(s.components[0].closed);
    EXPECT_LE(max_chord(s.components[0].points, true), eps);
    for (const Point& p : s.all_points) EXPECT_TRUE(b.on_curve(p));
    const auto dense = oracle::dense_loop(b, oracle::bisect_on_segment(b, {0, 0.5}, {3, 0.5}), eps / 20);
    EXPECT_LE(covering_radius(dense, s.all_points), eps);
    const Sample again = epsilon_sample(b, box, eps);
    EXPECT_EQ(again.all_points, s.all_points);
  }
}

TEST(Sample, SingularPointsAreAppended) {
  const Curve cusp = Curve::parse("y^2 - x^3");
  const Sample s = epsilon_sample(cusp, {-1, 2, -2, 2}, 0.05, {{0, 0}});
  EXPECT_NE(std::find(s.all_points.begin(), s.all_points.end(), Point{0, 0}), s.all_points.end());
  EXPECT_FALSE(s.warnings.empty());
  for (const Component& comp : s.components) EXPECT_LE(max_chord(comp.points, comp.closed), 0.05);
}

TEST(Sample, TargetPointCountsAreReachable) {
  const Curve b = Curve::parse(kButterfly);
  const BoundingBox box{-3, 3, -3, 3};
  for (std::size_t n : {101u, 441u, 1179u}) {
    const double eps = epsilon_for_point_count(b, box, n);
    EXPECT_EQ(epsilon_sample(b, box, eps).size(), n);
  }
}

TEST(NearestPoint, Examples) {
  const Curve c = Curve::parse("x^2 + y^2 - 1");
  const Point q = nearest_point_on_curve(c, {2, 0}, {0.9, 0.1});
  EXPECT_NEAR(q.x, 1.0, 1e-12);
  EXPECT_NEAR(q.y, 0.0, 1e-12);
  const Curve e = Curve::parse("(1/4)*x^2 + y^2 - 1");
  const Point r = nearest_point_on_curve(e, {0, 0}, {0.05, 0.98});
  EXPECT_NEAR(r.x, 0.0, 1e-12);
  EXPECT_NEAR(r.y, 1.0, 1e-12);
}

TEST(NearestPoint, ButterflyAgainstDenseSweep) {
  const Curve b = Curve::parse(kButterfly);
  const auto dense = oracle::dense_loop(b, oracle::bisect_on_segment(b, {0, 0.5}, {3, 0.5}), 1e-4);
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int i = 0; i < 30; ++i) {
    const Point p{u(rng), u(rng)};
    Point seed = dense[0];
    double best = INFINITY;
    for (const Point& d : dense)
      if (dist(p, d) < best) best = dist(p, d), seed = d;
    const Point q = nearest_point_on_curve(b, p, seed);
    EXPECT_TRUE(b.on_curve(q));
    EXPECT_LE(dist(p, q), best + 1e-8);
  }
}
