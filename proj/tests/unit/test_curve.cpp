#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mcl/curve.hpp"
#include "../support/oracles.hpp"

using namespace mcl;

namespace {

const char* kButterfly = "x^4 - x^2*y^2 + y^4 - 4*x^2 - 2*y^2 - x - 4*y + 1";

std::vector<Point> butterfly_loop(const Curve& c, double h) {
  return oracle::dense_loop(c, oracle::bisect_on_segment(c, {0, 0.5}, {3, 0.5}), h);
}

// Radius of the circle through three points.
double circumradius(Point a, Point b, Point c) {
  return dist(a, b) * dist(b, c) * dist(c, a) / (2 * std::abs(cross(b - a, c - a)));
}

}  // namespace

TEST(Jet, Examples) {
  const Curve circle = Curve::parse("x^2 + y^2 - 1");
  const Jet2 j = eval_jet2(circle, {1, 0});
  EXPECT_EQ(j.f, 0);
  EXPECT_EQ(j.fx, 2);
  EXPECT_EQ(j.fy, 0);
  EXPECT_EQ(j.fxx, 2);
  EXPECT_EQ(j.fxy, 0);
  EXPECT_EQ(j.fyy, 2);

  const Curve ellipse = Curve::parse("(1/4)*x^2 + y^2 - 1");
  const Jet2 e = eval_jet2(ellipse, {2, 0});
  EXPECT_EQ(e.f, 0);
  EXPECT_EQ(e.fx, 1);
  EXPECT_EQ(e.fy, 0);

  const Curve b = Curve::parse(kButterfly);
  const Jet2 o = eval_jet2(b, {0, 0});
  EXPECT_EQ(o.f, 1);
  EXPECT_EQ(o.fx, -1);
  EXPECT_EQ(o.fy, -4);
}

TEST(Jet, ConsistentWithDerivativePolynomials) {
  const RatPoly2 p = parse_poly(kButterfly);
  const Curve b(p);
  const Poly2d fxy = p.diff(Var::X).diff(Var::Y).cast<double>();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int i = 0; i < 100; ++i) {
    const Point q{u(rng), u(rng)};
    const Jet2 j = eval_jet2(b, q);
    EXPECT_DOUBLE_EQ(j.fxy, fxy.eval(q.x, q.y));
    EXPECT_DOUBLE_EQ(j.f, p.cast<double>().eval(q.x, q.y));
  }
}

TEST(Curvature, Circle) {
  for (double r : {0.5, 1.0, 3.0}) {
    const Curve c(RatPoly2(parse_poly("x^2 + y^2")) - RatPoly2::constant(Rational(r * r)));
    const CurvatureData k = curvature(c, {r, 0});
    EXPECT_NEAR(std::abs(k.radius_signed), r, 1e-14);
    EXPECT_NEAR(k.curvature, 1.0 / r, 1e-14);
    ASSERT_TRUE(k.center.has_value());
    EXPECT_NEAR(k.center->x, 0.0, 1e-14);
    EXPECT_NEAR(k.center->y, 0.0, 1e-14);
    EXPECT_NEAR(std::abs(curvature_homogeneous(c, {r, 0})), r, 1e-12);
  }
}

TEST(Curvature, EllipseVertex) {
  const Curve e = Curve::parse("(1/4)*x^2 + y^2 - 1");
  for (double sx : {2.0, -2.0}) {
    const CurvatureData k = curvature(e, {sx, 0});
    EXPECT_NEAR(k.curvature, 2.0, 1e-12);
    EXPECT_NEAR(std::abs(k.radius_signed), 0.5, 1e-12);
    EXPECT_NEAR(k.center->x, 0.75 * sx, 1e-12);
    EXPECT_NEAR(k.center->y, 0.0, 1e-12);
  }
  // Projective formula: d = 2 and H = -2 at this point, so R = 1 / (-2) in magnitude 1/2.
  const auto& hs = e.homogeneous_hessian();
  const double a = hs[0].eval(2, 0, 1), b = hs[1].eval(2, 0, 1), c = hs[2].eval(2, 0, 1);
  const double u = hs[3].eval(2, 0, 1), v = hs[4].eval(2, 0, 1), w = hs[5].eval(2, 0, 1);
  EXPECT_NEAR(a * c * w - a * v * v - c * u * u - w * b * b + 2 * b * u * v, -2.0, 1e-14);
  EXPECT_NEAR(curvature_homogeneous(e, {2, 0}), -0.5, 1e-14);
}

TEST(Curvature, Errors) {
  const Curve c = Curve::parse("x^2 + y^2 - 1");
  EXPECT_THROW(curvature(c, {2, 0}), NotOnCurve);
  const Curve cusp = Curve::parse("y^2 - x^3");
  EXPECT_THROW(curvature(cusp, {0, 0}), SingularPoint);
  // Inflection of y = x^3 at the origin: flat, not an error.
  const Curve cubic = Curve::parse("y - x^3");
  const CurvatureData k = curvature(cubic, {0, 0});
  EXPECT_TRUE(k.flat());
  EXPECT_EQ(k.curvature, 0.0);
  EXPECT_TRUE(std::isinf(k.radius_signed));
  // A line has vanishing projective Hessian.
  EXPECT_THROW(curvature_homogeneous(Curve::parse("x + y"), {0, 0}), HessianDegenerate);
}

TEST(Curvature, ButterflyFormulasAgreeAndMatchCircleFit) {
  const Curve b = Curve::parse(kButterfly);
  // Step 2e-4: three-point fits at spacing h and 2h, extrapolated to remove the O(h) bias.
  const std::vector<Point> loop = butterfly_loop(b, 2e-4);
  ASSERT_GT(loop.size(), 10000u);
  const std::size_t n = loop.size();
  // Start away from the seam where the march closes with an irregular step.
  for (std::size_t i = n / 120; i + n / 120 < n; i += n / 60) {
    const Point p = loop[i];
    const CurvatureData k = curvature(b, p);
    const double rh = curvature_homogeneous(b, p);
    EXPECT_NEAR(std::abs(rh) / std::abs(k.radius_signed), 1.0, 1e-9) << i;

    const double r1 = circumradius(loop[(i + n - 1) % n], p, loop[(i + 1) % n]);
    const double r2 = circumradius(loop[(i + n - 2) % n], p, loop[(i + 2) % n]);
    const double r_fit = (4 * r1 - r2) / 3;
    // Compared as curvatures: near inflections the radius blows up and a relative radius test is meaningless.
    EXPECT_NEAR(1 / r_fit, k.curvature, 1e-6 * std::max(k.curvature, 1.0)) << i;

    const Point g = b.gradient(p);
    EXPECT_LT(std::abs(cross(*k.center - p, g)), 1e-10 * b.gradient_scale(p) * (1 + norm(*k.center - p)));
  }
}

TEST(CriticalCurvature, Degrees) {
  const RatPoly2 b = parse_poly(kButterfly);
  EXPECT_EQ(critical_curvature_poly(b).degree(), 14);
  EXPECT_THROW(critical_curvature_poly(parse_poly("x^2 + y^2 - 1")), DegreeError);
  EXPECT_THROW(critical_curvature_poly(parse_poly("(1/4)*x^2 + y^2 - 1")), DegreeError);

  std::mt19937 rng(5);
  std::uniform_int_distribution<int> coef(-9, 9);
  for (int trial = 0; trial < 5; ++trial) {
    RatPoly2 q;
    for (int i = 0; i <= 4; ++i)
      for (int j = 0; i + j <= 4; ++j) {
        int c = coef(rng);
        if (c == 0) c = 1;
        q.add_to(i, j, Rational(c, 1 + (i + 2 * j) % 3));
      }
    EXPECT_EQ(critical_curvature_poly(q).degree(), 6 * 4 - 10) << to_string(q);
  }
}

TEST(CriticalCurvature, VanishesWhereRadiusIsStationary) {
  // G changes sign along the butterfly exactly where the signed curvature turns
  // (signed, so inflections, where the radius passes through infinity, are not turns).
  const RatPoly2 p = parse_poly(kButterfly);
  const Curve b(p);
  const Poly2d G = critical_curvature_poly(p).cast<double>();
  const std::vector<Point> loop = butterfly_loop(b, 1e-3);
  const std::size_t n = loop.size();
  int changes_g = 0, changes_dk = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = loop[i], c = loop[(i + 1) % n], d = loop[(i + 2) % n];
    if ((G.eval(a.x, a.y) > 0) != (G.eval(c.x, c.y) > 0)) ++changes_g;
    auto kappa = [&](Point q) {
      const CurvatureData k = curvature(b, q);
      return k.flat() ? 0.0 : 1 / k.radius_signed;
    };
    const double ka = kappa(a), kc = kappa(c), kd = kappa(d);
    if ((kc - ka > 0) != (kd - kc > 0)) ++changes_dk;
  }
  EXPECT_EQ(changes_g, 12);
  EXPECT_EQ(changes_dk, changes_g);
}

TEST(Residuals, Bottleneck) {
  const Curve c = Curve::parse("x^2 + y^2 - 1");
  for (double r : bottleneck_residual(c, {1, 0}, {-1, 0})) EXPECT_EQ(r, 0.0);
  const auto r = bottleneck_residual(c, {1, 0}, {0, 1});
  EXPECT_EQ(r[0], 0);
  EXPECT_EQ(r[1], 0);
  EXPECT_EQ(std::abs(r[2]), 2);
  EXPECT_EQ(std::abs(r[3]), 2);

  // Swapping x and y swaps components (1,2) and (3,4).
  const Curve b = Curve::parse(kButterfly);
  const Point x{0.3, -0.7}, y{1.1, 2.0};
  const auto f = bottleneck_residual(b, x, y), s = bottleneck_residual(b, y, x);
  EXPECT_EQ(f[0], s[1]);
  EXPECT_EQ(f[1], s[0]);
  EXPECT_EQ(f[2], s[3]);
  EXPECT_EQ(f[3], s[2]);
}

TEST(Residuals, Medial) {
  const Curve e = Curve::parse("(1/4)*x^2 + y^2 - 1");
  for (double r : medial_residual(e, {0, 0}, {0, 1}, {0, -1})) EXPECT_EQ(r, 0.0);
  for (double r : medial_residual(e, {1.5, 0}, {2, 0}, {2, 0})) EXPECT_EQ(r, 0.0);
}
