#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "mcl/geometry.hpp"
#include "mcl/poly.hpp"

namespace mcl {

/// Values of F and its partial derivatives through order two at one point.
struct Jet2 {
  double f = 0, fx = 0, fy = 0, fxx = 0, fxy = 0, fyy = 0;
  Point grad() const noexcept { return {fx, fy}; }
};

/// A plane curve V(F) with cached floating-point derivative polynomials.
///
/// Keeps the exact rational polynomial when one is available so symbolic
/// constructions (homogenization, Hessians, the critical-curvature equation)
/// never pass through floating point.
class Curve {
 public:
  Curve(const RatPoly2& exact) : exact_(exact) {  // NOLINT: implicit by design of the API
    init(exact.cast<double>());
    hess_ = hessian_entries(homogenize(exact, std::max(exact.degree(), 0)));
  }
  Curve(const Poly2d& f) {  // NOLINT
    init(f);
    hess_ = hessian_entries(homogenize(f, std::max(f.degree(), 0)));
  }
  static Curve parse(const std::string& text) { return Curve(parse_poly(text)); }

  const Poly2d& poly() const noexcept { return f_; }
  const std::optional<RatPoly2>& exact() const noexcept { return exact_; }
  int degree() const noexcept { return f_.degree(); }

  double value(Point p) const { return f_.eval(p.x, p.y); }
  Point gradient(Point p) const { return {fx_.eval(p.x, p.y), fy_.eval(p.x, p.y)}; }

  Jet2 jet(Point p) const {
    return {f_.eval(p.x, p.y),   fx_.eval(p.x, p.y),  fy_.eval(p.x, p.y),
            fxx_.eval(p.x, p.y), fxy_.eval(p.x, p.y), fyy_.eval(p.x, p.y)};
  }

  // Magnitude scale for F at p (sum of absolute monomial values).
  double scale(Point p) const { return f_.abs_eval(p.x, p.y); }
  double gradient_scale(Point p) const { return std::hypot(fx_.abs_eval(p.x, p.y), fy_.abs_eval(p.x, p.y)); }

  static constexpr double kOnCurveTol = 1e-9;
  bool on_curve(Point p, double rel_tol = kOnCurveTol) const {
    return std::abs(value(p)) <= rel_tol * scale(p);
  }

  const Poly2d& fx() const noexcept { return fx_; }
  const Poly2d& fy() const noexcept { return fy_; }

  // Second partials (xx, xy, yy, xz, yz, zz) of the degree-d homogenization.
  const std::array<Poly3d, 6>& homogeneous_hessian() const noexcept { return hess_; }

 private:
  void init(Poly2d f) {
    f_ = std::move(f);
    fx_ = f_.diff(Var::X);
    fy_ = f_.diff(Var::Y);
    fxx_ = fx_.diff(Var::X);
    fxy_ = fx_.diff(Var::Y);
    fyy_ = fy_.diff(Var::Y);
  }

  template <typename T>
  static std::array<Poly3d, 6> hessian_entries(const Poly3<T>& h) {
    const Poly3<T> hx = h.diff(Var::X), hy = h.diff(Var::Y), hz = h.diff(Var::Z);
    auto to_d = [](const Poly3<T>& q) {
      Poly3d out;
      q.for_each([&](int i, int j, int k, const T& c) { out.add_to(i, j, k, detail::to_double(c)); });
      return out;
    };
    return {to_d(hx.diff(Var::X)), to_d(hx.diff(Var::Y)), to_d(hy.diff(Var::Y)),
            to_d(hx.diff(Var::Z)), to_d(hy.diff(Var::Z)), to_d(hz.diff(Var::Z))};
  }

  std::optional<RatPoly2> exact_;
  std::array<Poly3d, 6> hess_;
  Poly2d f_, fx_, fy_, fxx_, fxy_, fyy_;
};

inline Jet2 eval_jet2(const Curve& c, Point p) { return c.jet(p); }

struct CurvatureData {
  double radius_signed = 0.0;  // +inf at a flat (inflection) point
  double curvature = 0.0;
  std::optional<Point> center;  // empty at a flat point
  bool flat() const noexcept { return !center.has_value(); }
};

namespace detail {

inline void require_smooth_on_curve(const Curve& c, Point p, const Jet2& j) {
  if (!c.on_curve(p))
    throw NotOnCurve("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") is not on the curve");
  if (std::hypot(j.fx, j.fy) <= 1e-10 * c.gradient_scale(p))
    throw SingularPoint("gradient vanishes at (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
}

}  // namespace detail

// Radius R = |grad F|^3 / D with D = Fxx Fy^2 - 2 Fxy Fx Fy + Fyy Fx^2.
// The center lies on the normal line: p - grad F * |grad F|^2 / D.
inline CurvatureData curvature(const Curve& c, Point p) {
  const Jet2 j = c.jet(p);
  detail::require_smooth_on_curve(c, p, j);
  const double g2 = j.fx * j.fx + j.fy * j.fy;
  const double d = j.fxx * j.fy * j.fy - 2.0 * j.fxy * j.fx * j.fy + j.fyy * j.fx * j.fx;
  const double d_mag = std::abs(j.fxx) * j.fy * j.fy + 2.0 * std::abs(j.fxy * j.fx * j.fy) + std::abs(j.fyy) * j.fx * j.fx;
  CurvatureData out;
  if (std::abs(d) <= 1e-13 * d_mag || d == 0.0) {
    out.radius_signed = std::numeric_limits<double>::infinity();
    out.curvature = 0.0;
    return out;
  }
  const double g3 = g2 * std::sqrt(g2);
  out.radius_signed = g3 / d;
  out.curvature = std::abs(d) / g3;
  out.center = p - (g2 / d) * j.grad();
  return out;
}

// Projective form: R = (d-1)^2 |grad F|^3 / (z^2 H), H the Hessian determinant of the homogenization.
inline double curvature_homogeneous(const Curve& c, Point p) {
  const Jet2 j = c.jet(p);
  detail::require_smooth_on_curve(c, p, j);
  const int d = c.degree();
  const auto& hs = c.homogeneous_hessian();
  const double a = hs[0].eval(p.x, p.y, 1.0), b = hs[1].eval(p.x, p.y, 1.0), e = hs[2].eval(p.x, p.y, 1.0);
  const double u = hs[3].eval(p.x, p.y, 1.0), v = hs[4].eval(p.x, p.y, 1.0), w = hs[5].eval(p.x, p.y, 1.0);
  // | a b u |
  // | b e v |
  // | u v w |
  const double h = a * e * w - a * v * v - e * u * u - w * b * b + 2.0 * b * u * v;
  const double h_mag = std::abs(a * e * w) + std::abs(a * v * v) + std::abs(e * u * u) + std::abs(w * b * b) +
                       2.0 * std::abs(b * u * v);
  if (h == 0.0 || std::abs(h) <= 1e-12 * h_mag) throw HessianDegenerate("Hessian determinant vanishes at the point");
  const double g2 = j.fx * j.fx + j.fy * j.fy;
  return (d - 1.0) * (d - 1.0) * g2 * std::sqrt(g2) / h;
}

// H(x, y) = det Hessian(homogenize(P, deg P)) at z = 1, in exact arithmetic.
inline RatPoly2 hessian_poly(const RatPoly2& p) {
  return hessian_determinant(homogenize(p, p.degree())).at_z(Rational(1));
}

namespace detail {

inline RatPoly2 critical_curvature_poly_any_degree(const RatPoly2& f) {
  const RatPoly2 fx = f.diff(Var::X), fy = f.diff(Var::Y);
  const RatPoly2 fxx = fx.diff(Var::X), fxy = fx.diff(Var::Y), fyy = fy.diff(Var::Y);
  const RatPoly2 h = hessian_poly(f);
  const RatPoly2 hx = h.diff(Var::X), hy = h.diff(Var::Y);
  const RatPoly2 n = fx * fx + fy * fy;
  const RatPoly2 bracket = (fxx - fyy) * fx * fy + fxy * (fy * fy - fx * fx);
  return n * (fy * hx - fx * hy) - Rational(3) * (h * bracket);
}

}  // namespace detail

/// G = (Fx^2+Fy^2)(Fy Hx - Fx Hy) - 3 H [(Fxx - Fyy) Fx Fy + Fxy (Fy^2 - Fx^2)].
/// Its zeros on the curve are the points of critical curvature.
inline RatPoly2 critical_curvature_poly(const RatPoly2& f) {
  if (f.degree() < 3)
    throw DegreeError("critical curvature needs degree >= 3: for lines and circles the derivative of the "
                      "radius of curvature is identically 0");
  return detail::critical_curvature_poly_any_degree(f);
}

// (F(x), F(y), (y-x) x grad F(x), (x-y) x grad F(y)) with x the 2-D cross product.
inline std::array<double, 4> bottleneck_residual(const Curve& c, Point x, Point y) {
  return {c.value(x), c.value(y), cross(y - x, c.gradient(x)), cross(x - y, c.gradient(y))};
}

// (F(q1), F(q2), |m-q1|^2 - |m-q2|^2, (m-q1) x grad F(q1), (m-q2) x grad F(q2)).
inline std::array<double, 5> medial_residual(const Curve& c, Point m, Point q1, Point q2) {
  return {c.value(q1), c.value(q2), norm2(m - q1) - norm2(m - q2), cross(m - q1, c.gradient(q1)),
          cross(m - q2, c.gradient(q2))};
}

}  // namespace mcl
