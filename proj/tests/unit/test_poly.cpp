#include <gtest/gtest.h>

#include <random>

#include "mcl/poly.hpp"

using namespace mcl;

namespace {

const char* kButterfly = "x^4 - x^2*y^2 + y^4 - 4*x^2 - 2*y^2 - x - 4*y + 1";

RatPoly2 mono(int i, int j, Rational c) { return RatPoly2::monomial(i, j, c); }

}  // namespace

TEST(Parse, Butterfly) {
  const RatPoly2 b = parse_poly(kButterfly);
  EXPECT_EQ(b.degree(), 4);
  EXPECT_EQ(b.coeff(4, 0), 1);
  EXPECT_EQ(b.coeff(2, 2), -1);
  EXPECT_EQ(b.coeff(0, 4), 1);
  EXPECT_EQ(b.coeff(2, 0), -4);
  EXPECT_EQ(b.coeff(0, 2), -2);
  EXPECT_EQ(b.coeff(1, 0), -1);
  EXPECT_EQ(b.coeff(0, 1), -4);
  EXPECT_EQ(b.coeff(0, 0), 1);
  EXPECT_EQ(b.coeff(3, 1), 0);
}

TEST(Parse, CircleAndEllipse) {
  const RatPoly2 c = parse_poly("x^2 + y^2 - 1");
  EXPECT_EQ(c.degree(), 2);
  EXPECT_EQ(c, mono(2, 0, 1) + mono(0, 2, 1) - mono(0, 0, 1));
  const RatPoly2 e = parse_poly("(1/4)*x^2 + y^2 - 1");
  EXPECT_EQ(e.degree(), 2);
  EXPECT_EQ(e.coeff(2, 0), Rational(1, 4));
}

TEST(Parse, DecimalsAreExact) {
  const RatPoly2 p = parse_poly("0.1*x + 2.50");
  EXPECT_EQ(p.coeff(1, 0), Rational(1, 10));
  EXPECT_EQ(p.coeff(0, 0), Rational(5, 2));
}

TEST(Parse, ParenthesizedExpressionsExpand) {
  EXPECT_EQ(parse_poly("(x+y)*(x-y)"), parse_poly("x^2 - y^2"));
  EXPECT_EQ(parse_poly("(x^2+y^2-x)^2 - (1/4)*(x^2+y^2)"),
            parse_poly("x^4 + 2*x^2*y^2 + y^4 - 2*x^3 - 2*x*y^2 + x^2 - (1/4)*x^2 - (1/4)*y^2"));
  EXPECT_EQ(parse_poly("-x + -y"), parse_poly("-x - y"));
}

TEST(Parse, SyntaxErrorsCarryOffsets) {
  try {
    parse_poly("x^2 + * y");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 6u);
  }
  EXPECT_THROW(parse_poly(""), SyntaxError);
  EXPECT_THROW(parse_poly("2x"), SyntaxError);   // implicit multiplication
  EXPECT_THROW(parse_poly("x y"), SyntaxError);
  EXPECT_THROW(parse_poly("x^"), SyntaxError);
  EXPECT_THROW(parse_poly("z + 1"), SyntaxError);
  EXPECT_THROW(parse_poly("(1/0)*x"), SyntaxError);
  EXPECT_THROW(parse_poly("(x + 1"), SyntaxError);
}

TEST(Parse, DegreeOverflow) {
  EXPECT_NO_THROW(parse_poly("x^64"));
  EXPECT_THROW(parse_poly("x^65"), OverflowError);
  EXPECT_THROW(parse_poly("x^40*y^40"), OverflowError);
}

TEST(Arithmetic, Derivatives) {
  EXPECT_EQ(poly_diff(parse_poly("x^2*y"), Var::X), parse_poly("2*x*y"));
  EXPECT_EQ(poly_diff(parse_poly(kButterfly), Var::X), parse_poly("4*x^3 - 2*x*y^2 - 8*x - 1"));
  EXPECT_EQ(poly_diff(parse_poly(kButterfly), Var::Y), parse_poly("-2*x^2*y + 4*y^3 - 4*y - 4"));
  EXPECT_TRUE(poly_diff(parse_poly("x^3"), Var::Y).is_zero());
}

TEST(Arithmetic, ProductsAndSums) {
  EXPECT_EQ(poly_mul(parse_poly("x+y"), parse_poly("x-y")), parse_poly("x^2-y^2"));
  EXPECT_EQ(poly_add(parse_poly("x+y"), parse_poly("x-y")), parse_poly("2*x"));
  EXPECT_TRUE((parse_poly("x+y") - parse_poly("x+y")).is_zero());
  EXPECT_EQ((parse_poly("x+y") - parse_poly("x+y")).degree(), -1);
}

TEST(Arithmetic, ProductDegreeIsAdditive) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    RatPoly2 a, b;
    const int da = 1 + trial % 4, db = 1 + (trial / 4) % 4;
    for (int i = 0; i <= da; ++i)
      for (int j = 0; i + j <= da; ++j) a.add_to(i, j, coef(rng));
    for (int i = 0; i <= db; ++i)
      for (int j = 0; i + j <= db; ++j) b.add_to(i, j, coef(rng));
    a.add_to(da, 0, a.coeff(da, 0) == 0 ? 1 : 0);
    b.add_to(0, db, b.coeff(0, db) == 0 ? 1 : 0);
    EXPECT_EQ((a * b).degree(), a.degree() + b.degree());
  }
}

TEST(Arithmetic, Poly3) {
  const RatPoly3 h = homogenize(parse_poly("x*y + 1"), 3);
  EXPECT_EQ(h.coeff(1, 1, 1), 1);
  EXPECT_EQ(h.coeff(0, 0, 3), 1);
  EXPECT_EQ(h.diff(Var::Z).coeff(0, 0, 2), 3);
  EXPECT_EQ((h * h).homogeneous_degree(), 6);
  EXPECT_FALSE((h + RatPoly3(homogenize(parse_poly("x"), 1))).homogeneous_degree().has_value());
}

TEST(Homogenize, Examples) {
  const RatPoly3 c = homogenize(parse_poly("x^2 + y^2 - 1"), 2);
  EXPECT_EQ(c.homogeneous_degree(), 2);
  EXPECT_EQ(c.coeff(2, 0, 0), 1);
  EXPECT_EQ(c.coeff(0, 2, 0), 1);
  EXPECT_EQ(c.coeff(0, 0, 2), -1);

  const RatPoly3 b = homogenize(parse_poly(kButterfly), 4);
  EXPECT_EQ(b.homogeneous_degree(), 4);
  EXPECT_EQ(b.coeff(1, 0, 3), -1);
  EXPECT_EQ(b.coeff(0, 1, 3), -4);
  EXPECT_EQ(b.coeff(0, 0, 4), 1);
  EXPECT_EQ(b.at_z(Rational(1)), parse_poly(kButterfly));

  const RatPoly3 l = homogenize(parse_poly("x + y"), 3);
  EXPECT_EQ(l.homogeneous_degree(), 3);
  EXPECT_EQ(l.coeff(1, 0, 2), 1);
  EXPECT_EQ(l.coeff(0, 1, 2), 1);

  EXPECT_THROW(homogenize(parse_poly(kButterfly), 3), DegreeError);
}

TEST(Printer, RoundTrip) {
  for (const char* s : {kButterfly, "x^2 + y^2 - 1", "(1/4)*x^2 + y^2 - 1", "-(3/7)*x*y^3 + 0.5*y - 12",
                        "0", "(x^2+y^2-x)^2 - (1/4)*(x^2+y^2)"}) {
    const RatPoly2 p = parse_poly(s);
    EXPECT_EQ(parse_poly(to_string(p)), p) << s << " printed as " << to_string(p);
  }
}

TEST(Printer, RoundTripRandomFloatPolys) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    Poly2d p;
    for (int i = 0; i <= 4; ++i)
      for (int j = 0; i + j <= 4; ++j) p.add_to(i, j, coef(rng) * std::pow(10.0, trial % 5 - 2));
    const Poly2d back = parse_poly(to_string(p)).cast<double>();
    EXPECT_EQ(back, p) << to_string(p);
  }
}

TEST(Eval, MatchesExpandedSum) {
  const RatPoly2 b = parse_poly(kButterfly);
  const Poly2d bd = b.cast<double>();
  const double x = 0.37, y = -1.21;
  const double direct = std::pow(x, 4) - x * x * y * y + std::pow(y, 4) - 4 * x * x - 2 * y * y - x - 4 * y + 1;
  EXPECT_NEAR(bd.eval(x, y), direct, 1e-14);
  EXPECT_NEAR(bd.abs_eval(x, y),
              std::pow(x, 4) + x * x * y * y + std::pow(y, 4) + 4 * x * x + 2 * y * y + std::abs(x) + 4 * std::abs(y) + 1,
              1e-14);
}

TEST(Convert, RationalToNearestDouble) {
  EXPECT_EQ(detail::to_double(Rational(1, 3)), 1.0 / 3.0);
  EXPECT_EQ(detail::to_double(Rational(-2, 3)), -2.0 / 3.0);
  EXPECT_EQ(parse_poly("0.1*x").cast<double>().coeff(1, 0), 0.1);
  EXPECT_EQ(parse_poly("-0.7*x").cast<double>().coeff(1, 0), -0.7);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double d = u(rng);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    EXPECT_EQ(detail::to_double(parse_poly(buf).coeff(0, 0)), d) << buf;
  }
}
