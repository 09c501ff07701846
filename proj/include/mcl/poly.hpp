#pragma once

// Dense bivariate / trivariate polynomials over double or exact rationals.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <tuple>
#include <type_traits>
#include <optional>
#include <string>
#include <vector>

#include "mcl/errors.hpp"

namespace mcl {

using Rational = mpq_class;

namespace detail {

inline bool is_zero(double v) { return v == 0.0; }
inline bool is_zero(const Rational& v) { return sgn(v) == 0; }
inline double to_double(double v) { return v; }
// Nearest double, ties to even. GMP's own conversion truncates toward zero.
inline double to_double(const Rational& v) {
  const double t = v.get_d();
  if (std::isinf(t) || Rational(t) == v) return t;
  const double away = std::nextafter(t, sgn(v) > 0 ? HUGE_VAL : -HUGE_VAL);
  if (std::isinf(away)) return t;
  const int c = cmp(abs(v - Rational(t)), abs(Rational(away) - v));
  if (c != 0) return c < 0 ? t : away;
  std::int64_t bits;
  std::memcpy(&bits, &t, sizeof bits);
  return (bits & 1) ? away : t;
}
inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(const Rational&) { return true; }

}  // namespace detail

enum class Var { X, Y, Z };

// c(i,j) is the coefficient of x^i * y^j.
template <typename T>
class Poly2 {
 public:
  Poly2() = default;

  static Poly2 constant(const T& c) {
    Poly2 p;
    p.set(0, 0, c);
    return p;
  }
  static Poly2 monomial(int i, int j, const T& c = T(1)) {
    Poly2 p;
    p.set(i, j, c);
    return p;
  }

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  bool is_zero() const noexcept { return nx_ == 0; }

  // -1 for the zero polynomial.
  int degree() const noexcept {
    int d = -1;
    for (int i = 0; i < nx_; ++i)
      for (int j = 0; j < ny_; ++j)
        if (!detail::is_zero(at(i, j))) d = std::max(d, i + j);
    return d;
  }

  T coeff(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return T(0);
    return at(i, j);
  }

  void set(int i, int j, const T& v) {
    if (!detail::is_finite(v)) throw Error("non-finite polynomial coefficient");
    if (i >= nx_ || j >= ny_) {
      if (detail::is_zero(v)) return;
      resize(std::max(nx_, i + 1), std::max(ny_, j + 1));
    }
    at(i, j) = v;
    trim();
  }

  void add_to(int i, int j, const T& v) { set(i, j, coeff(i, j) + v); }

  template <typename F>
  void for_each(F&& f) const {
    for (int i = 0; i < nx_; ++i)
      for (int j = 0; j < ny_; ++j)
        if (!detail::is_zero(at(i, j))) f(i, j, at(i, j));
  }

  Poly2 diff(Var v) const {
    Poly2 out;
    if (v == Var::Z) return out;
    for_each([&](int i, int j, const T& c) {
      if (v == Var::X && i > 0) out.set(i - 1, j, c * T(i));
      if (v == Var::Y && j > 0) out.set(i, j - 1, c * T(j));
    });
    return out;
  }

  // Horner evaluation; only meaningful for floating coefficients.
  double eval(double x, double y) const {
    double acc = 0.0;
    for (int i = nx_ - 1; i >= 0; --i) {
      double row = 0.0;
      for (int j = ny_ - 1; j >= 0; --j) row = row * y + detail::to_double(at(i, j));
      acc = acc * x + row;
    }
    return acc;
  }

  // Sum of |c_ij| |x|^i |y|^j: the magnitude against which rounding in eval() is judged.
  double abs_eval(double x, double y) const {
    const double ax = std::abs(x), ay = std::abs(y);
    double acc = 0.0;
    for (int i = nx_ - 1; i >= 0; --i) {
      double row = 0.0;
      for (int j = ny_ - 1; j >= 0; --j) row = row * ay + std::abs(detail::to_double(at(i, j)));
      acc = acc * ax + row;
    }
    return acc;
  }

  template <typename U>
  Poly2<U> cast() const {
    Poly2<U> out;
    for_each([&](int i, int j, const T& c) {
      if constexpr (std::is_same_v<U, double>) out.set(i, j, detail::to_double(c));
      else out.set(i, j, U(c));
    });
    return out;
  }

  friend Poly2 operator+(const Poly2& a, const Poly2& b) {
    Poly2 out = a;
    b.for_each([&](int i, int j, const T& c) { out.add_to(i, j, c); });
    return out;
  }
  friend Poly2 operator-(const Poly2& a, const Poly2& b) {
    Poly2 out = a;
    b.for_each([&](int i, int j, const T& c) { out.add_to(i, j, -c); });
    return out;
  }
  friend Poly2 operator-(const Poly2& a) { return Poly2() - a; }
  friend Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 out;
    if (a.is_zero() || b.is_zero()) return out;
    out.resize(a.nx_ + b.nx_ - 1, a.ny_ + b.ny_ - 1);
    a.for_each([&](int i, int j, const T& c) {
      b.for_each([&](int k, int l, const T& e) { out.at(i + k, j + l) += c * e; });
    });
    out.trim();
    return out;
  }
  friend Poly2 operator*(const T& s, const Poly2& a) {
    Poly2 out;
    a.for_each([&](int i, int j, const T& c) { out.set(i, j, s * c); });
    return out;
  }
  friend bool operator==(const Poly2& a, const Poly2& b) {
    if (a.nx_ != b.nx_ || a.ny_ != b.ny_) return false;
    for (std::size_t k = 0; k < a.c_.size(); ++k)
      if (!(a.c_[k] == b.c_[k])) return false;
    return true;
  }

 private:
  T& at(int i, int j) { return c_[static_cast<std::size_t>(i) * ny_ + j]; }
  const T& at(int i, int j) const { return c_[static_cast<std::size_t>(i) * ny_ + j]; }

  void resize(int nx, int ny) {
    std::vector<T> c(static_cast<std::size_t>(nx) * ny, T(0));
    for (int i = 0; i < std::min(nx, nx_); ++i)
      for (int j = 0; j < std::min(ny, ny_); ++j) c[static_cast<std::size_t>(i) * ny + j] = at(i, j);
    c_ = std::move(c);
    nx_ = nx;
    ny_ = ny;
  }

  void trim() {
    int nx = nx_, ny = ny_;
    auto row_zero = [&](int i) {
      for (int j = 0; j < ny; ++j)
        if (!detail::is_zero(at(i, j))) return false;
      return true;
    };
    auto col_zero = [&](int j) {
      for (int i = 0; i < nx; ++i)
        if (!detail::is_zero(at(i, j))) return false;
      return true;
    };
    while (nx > 0 && row_zero(nx - 1)) --nx;
    while (ny > 0 && col_zero(ny - 1)) --ny;
    if (nx == 0 || ny == 0) nx = ny = 0;
    if (nx != nx_ || ny != ny_) resize(nx, ny);
  }

  std::vector<T> c_;
  int nx_ = 0, ny_ = 0;
};

// c(i,j,k) is the coefficient of x^i * y^j * z^k.
template <typename T>
class Poly3 {
 public:
  Poly3() = default;

  int degree() const {
    int d = -1;
    for_each([&](int i, int j, int k, const T&) { d = std::max(d, i + j + k); });
    return d;
  }

  // The common total degree of all monomials, or nullopt if mixed (or zero polynomial).
  std::optional<int> homogeneous_degree() const {
    std::optional<int> d;
    bool ok = true;
    for_each([&](int i, int j, int k, const T&) {
      if (!d) d = i + j + k;
      else if (*d != i + j + k) ok = false;
    });
    return ok ? d : std::nullopt;
  }

  T coeff(int i, int j, int k) const {
    auto it = find(i, j, k);
    return it == terms_.end() ? T(0) : it->c;
  }

  void add_to(int i, int j, int k, const T& v) {
    if (detail::is_zero(v)) return;
    auto it = find(i, j, k);
    if (it == terms_.end()) {
      terms_.push_back({i, j, k, v});
      std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
        return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
      });
      return;
    }
    it->c += v;
    if (detail::is_zero(it->c)) terms_.erase(it);
  }

  template <typename F>
  void for_each(F&& f) const {
    for (const Term& t : terms_) f(t.i, t.j, t.k, t.c);
  }

  Poly3 diff(Var v) const {
    Poly3 out;
    for_each([&](int i, int j, int k, const T& c) {
      if (v == Var::X && i > 0) out.add_to(i - 1, j, k, c * T(i));
      if (v == Var::Y && j > 0) out.add_to(i, j - 1, k, c * T(j));
      if (v == Var::Z && k > 0) out.add_to(i, j, k - 1, c * T(k));
    });
    return out;
  }

  // Substitute z = value, giving a bivariate polynomial.
  Poly2<T> at_z(const T& value) const {
    Poly2<T> out;
    for_each([&](int i, int j, int k, const T& c) {
      T zk(1);
      for (int e = 0; e < k; ++e) zk *= value;
      out.add_to(i, j, c * zk);
    });
    return out;
  }

  double eval(double x, double y, double z) const {
    double acc = 0.0;
    for_each([&](int i, int j, int k, const T& c) {
      acc += detail::to_double(c) * std::pow(x, i) * std::pow(y, j) * std::pow(z, k);
    });
    return acc;
  }

  friend Poly3 operator+(const Poly3& a, const Poly3& b) {
    Poly3 out = a;
    b.for_each([&](int i, int j, int k, const T& c) { out.add_to(i, j, k, c); });
    return out;
  }
  friend Poly3 operator-(const Poly3& a, const Poly3& b) {
    Poly3 out = a;
    b.for_each([&](int i, int j, int k, const T& c) { out.add_to(i, j, k, -c); });
    return out;
  }
  friend Poly3 operator*(const Poly3& a, const Poly3& b) {
    Poly3 out;
    a.for_each([&](int i, int j, int k, const T& c) {
      b.for_each([&](int l, int m, int n, const T& e) { out.add_to(i + l, j + m, k + n, c * e); });
    });
    return out;
  }
  friend Poly3 operator*(const T& s, const Poly3& a) {
    Poly3 out;
    a.for_each([&](int i, int j, int k, const T& c) { out.add_to(i, j, k, s * c); });
    return out;
  }
  friend bool operator==(const Poly3& a, const Poly3& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t n = 0; n < a.terms_.size(); ++n) {
      const Term &s = a.terms_[n], &t = b.terms_[n];
      if (s.i != t.i || s.j != t.j || s.k != t.k || !(s.c == t.c)) return false;
    }
    return true;
  }

 private:
  struct Term {
    int i, j, k;
    T c;
  };
  typename std::vector<Term>::iterator find(int i, int j, int k) {
    return std::find_if(terms_.begin(), terms_.end(),
                        [&](const Term& t) { return t.i == i && t.j == j && t.k == k; });
  }
  typename std::vector<Term>::const_iterator find(int i, int j, int k) const {
    return std::find_if(terms_.begin(), terms_.end(),
                        [&](const Term& t) { return t.i == i && t.j == j && t.k == k; });
  }

  std::vector<Term> terms_;  // sorted by (i,j,k), no zero coefficients
};

using RatPoly2 = Poly2<Rational>;
using Poly2d = Poly2<double>;
using RatPoly3 = Poly3<Rational>;
using Poly3d = Poly3<double>;

template <typename T>
Poly2<T> poly_diff(const Poly2<T>& p, Var v) { return p.diff(v); }
template <typename T>
Poly3<T> poly_diff(const Poly3<T>& p, Var v) { return p.diff(v); }
template <typename P>
P poly_mul(const P& a, const P& b) { return a * b; }
template <typename P>
P poly_add(const P& a, const P& b) { return a + b; }

// F(x,y) -> z^d F(x/z, y/z).
template <typename T>
Poly3<T> homogenize(const Poly2<T>& p, int d) {
  if (d < p.degree()) throw DegreeError("homogenize: target degree " + std::to_string(d) +
                                        " is below the polynomial degree " + std::to_string(p.degree()));
  Poly3<T> out;
  p.for_each([&](int i, int j, const T& c) { out.add_to(i, j, d - i - j, c); });
  return out;
}

// Determinant of the 3x3 Hessian of a trivariate polynomial.
template <typename T>
Poly3<T> hessian_determinant(const Poly3<T>& f) {
  const Poly3<T> fx = f.diff(Var::X), fy = f.diff(Var::Y), fz = f.diff(Var::Z);
  const Poly3<T> a = fx.diff(Var::X), b = fx.diff(Var::Y), c = fx.diff(Var::Z);
  const Poly3<T> e = fy.diff(Var::Y), g = fy.diff(Var::Z), k = fz.diff(Var::Z);
  // | a b c |
  // | b e g |
  // | c g k |
  const T two(2);
  return a * e * k - a * g * g - e * c * c - k * b * b + two * (b * c * g);
}

// ---------------------------------------------------------------------------
// Expression parser and printer.

namespace detail {

class PolyParser {
 public:
  explicit PolyParser(const std::string& s) : s_(s) {}

  RatPoly2 parse() {
    skip();
    if (pos_ >= s_.size()) throw SyntaxError("empty expression", pos_);
    RatPoly2 p = expr();
    skip();
    if (pos_ != s_.size()) throw SyntaxError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return p;
  }

 private:
  static constexpr int kMaxDegree = 64;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) throw SyntaxError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  RatPoly2 checked(RatPoly2 p, std::size_t at) {
    if (p.degree() > kMaxDegree) throw OverflowError("polynomial degree exceeds 64 at byte " + std::to_string(at));
    return p;
  }

  RatPoly2 expr() {
    RatPoly2 acc = term();
    while (true) {
      if (peek('+')) {
        ++pos_;
        acc = acc + term();
      } else if (peek('-')) {
        ++pos_;
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  // A term may carry one leading sign so "-x^2 + 1" parses.
  RatPoly2 term() {
    bool negate = false;
    if (peek('-') || peek('+')) {
      negate = s_[pos_] == '-';
      ++pos_;
    }
    const std::size_t start = pos_;
    RatPoly2 acc = factor();
    while (peek('*')) {
      ++pos_;
      acc = checked(acc * factor(), start);
    }
    return negate ? -acc : acc;
  }

  RatPoly2 factor() {
    skip();
    if (pos_ >= s_.size()) throw SyntaxError("unexpected end of expression", pos_);
    const std::size_t start = pos_;
    const char c = s_[pos_];
    RatPoly2 base;
    if (c == 'x' || c == 'y') {
      ++pos_;
      base = c == 'x' ? RatPoly2::monomial(1, 0) : RatPoly2::monomial(0, 1);
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      base = RatPoly2::constant(number());
      reject_implicit_product();
      return base;
    } else if (c == '(') {
      if (auto frac = try_fraction()) {
        base = RatPoly2::constant(*frac);
      } else {
        ++pos_;
        base = expr();
        expect(')');
      }
    } else {
      throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    }
    if (peek('^')) {
      ++pos_;
      skip();
      const std::size_t at = pos_;
      const long e = uint_literal();
      if (e > kMaxDegree) throw OverflowError("exponent exceeds 64 at byte " + std::to_string(at));
      RatPoly2 r = RatPoly2::constant(Rational(1));
      for (long k = 0; k < e; ++k) r = checked(r * base, start);
      base = r;
    }
    reject_implicit_product();
    return base;
  }

  void reject_implicit_product() {
    skip();
    if (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == 'x' || c == 'y' || c == '(' || std::isdigit(static_cast<unsigned char>(c)))
        throw SyntaxError("implicit multiplication is not allowed; use '*'", pos_);
    }
  }

  long uint_literal() {
    const std::size_t start = pos_;
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > 1'000'000) throw OverflowError("integer literal too large at byte " + std::to_string(start));
      ++pos_;
    }
    if (pos_ == start) throw SyntaxError("expected an unsigned integer", pos_);
    return v;
  }

  // int or decimal, converted exactly.
  Rational number() {
    const std::size_t start = pos_;
    std::string digits;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
    std::string frac;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) frac += s_[pos_++];
      if (frac.empty()) throw SyntaxError("malformed decimal", pos_);
    }
    if (digits.empty() && frac.empty()) throw SyntaxError("expected a number", start);
    mpz_class num(digits.empty() ? std::string("0") : digits + frac, 10);
    mpz_class den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  // '(' int '/' int ')'; restores the position if the pattern does not match.
  std::optional<Rational> try_fraction() {
    const std::size_t save = pos_;
    ++pos_;  // '('
    skip();
    bool neg = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      neg = true;
      ++pos_;
      skip();
    }
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      pos_ = save;
      return std::nullopt;
    }
    std::string a;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) a += s_[pos_++];
    if (!peek('/')) {
      pos_ = save;
      return std::nullopt;
    }
    ++pos_;
    skip();
    const std::size_t at = pos_;
    std::string b;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) b += s_[pos_++];
    if (b.empty()) throw SyntaxError("expected denominator", at);
    mpz_class den(b, 10);
    if (den == 0) throw SyntaxError("zero denominator", at);
    expect(')');
    Rational r(mpz_class(a, 10), den);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

inline std::string format_coeff(const Rational& c) {
  if (c.get_den() == 1) return c.get_num().get_str();
  return "(" + c.get_num().get_str() + "/" + c.get_den().get_str() + ")";
}

inline std::string format_coeff(double c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", c);
  std::string s(buf);
  if (s.find_first_of("eE") != std::string::npos) {
    // The grammar has no exponent notation; print the exact binary value as a fraction.
    Rational r(c);
    return format_coeff(r);
  }
  return s;
}

}  // namespace detail

inline RatPoly2 parse_poly(const std::string& text) { return detail::PolyParser(text).parse(); }

// Terms by descending total degree, then descending power of x; output re-parses to the same polynomial.
template <typename T>
std::string to_string(const Poly2<T>& p) {
  struct Term {
    int i, j;
    T c;
  };
  std::vector<Term> terms;
  p.for_each([&](int i, int j, const T& c) { terms.push_back({i, j, c}); });
  if (terms.empty()) return "0";
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.i + a.j != b.i + b.j) return a.i + a.j > b.i + b.j;
    return a.i > b.i;
  });
  std::string out;
  bool first = true;
  for (const Term& t : terms) {
    const bool neg = t.c < 0;
    T mag = neg ? T(-t.c) : t.c;
    if (first) out += neg ? "-" : "";
    else out += neg ? " - " : " + ";
    first = false;
    std::string mono;
    auto var = [&](const char* v, int e) {
      if (e == 0) return;
      if (!mono.empty()) mono += "*";
      mono += v;
      if (e > 1) mono += "^" + std::to_string(e);
    };
    var("x", t.i);
    var("y", t.j);
    if (mono.empty()) out += detail::format_coeff(mag);
    else if (mag == T(1)) out += mono;
    else out += detail::format_coeff(mag) + "*" + mono;
  }
  return out;
}

}  // namespace mcl
