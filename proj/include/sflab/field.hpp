#pragma once

#include <gmpxx.h>

#include <string>

#include "errors.hpp"

namespace sflab {

using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational rat(long num, long den = 1) {
  if (den == 0) throw DivisionByZero("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_squarefree(long d) {
  if (d < 1) return false;
  for (long f = 2; f * f <= d; ++f)
    if (d % (f * f) == 0) return false;
  return true;
}

// Element of Q(i, sqrt(d)) stored as a + b*i + c*rt + e*i*rt, rt = sqrt(d).
// d is a square-free integer >= 2, fixed per session (default 2).  Values with
// c == e == 0 are radical-free and combine with any d.
struct FieldElement {
  Rational a, b, c, e;
  long d = 2;

  FieldElement() : a(0), b(0), c(0), e(0) {}
  explicit FieldElement(const Rational& ra) : a(ra), b(0), c(0), e(0) {}
  FieldElement(const Rational& ra, const Rational& rb, const Rational& rc,
               const Rational& re, long rd = 2)
      : a(ra), b(rb), c(rc), e(re), d(rd) {
    if ((c != 0 || e != 0) && (d < 2 || !is_squarefree(d)))
      throw DimensionMismatch("field radical must be square-free and >= 2");
  }

  static FieldElement zero() { return FieldElement(); }
  static FieldElement one() { return FieldElement(rat(1)); }
  static FieldElement imag() { return FieldElement(rat(0), rat(1), rat(0), rat(0)); }
  static FieldElement root(long d) { return FieldElement(rat(0), rat(0), rat(1), rat(0), d); }
  static FieldElement from_rat(const Rational& r) { return FieldElement(r); }

  bool is_zero() const { return a == 0 && b == 0 && c == 0 && e == 0; }
  bool radical_free() const { return c == 0 && e == 0; }
  bool is_real() const { return b == 0 && e == 0; }
  bool is_rational() const { return radical_free() && b == 0; }

  // Unify session radicals; radical-free values are promoted silently.
  static long join_radical(const FieldElement& x, const FieldElement& y) {
    if (x.radical_free()) return y.d;
    if (y.radical_free()) return x.d;
    if (x.d != y.d) throw DimensionMismatch("mixing distinct field radicals");
    return x.d;
  }

  friend FieldElement operator+(const FieldElement& x, const FieldElement& y) {
    return FieldElement(x.a + y.a, x.b + y.b, x.c + y.c, x.e + y.e, join_radical(x, y));
  }
  friend FieldElement operator-(const FieldElement& x, const FieldElement& y) {
    return FieldElement(x.a - y.a, x.b - y.b, x.c - y.c, x.e - y.e, join_radical(x, y));
  }
  FieldElement operator-() const { return FieldElement(-a, -b, -c, -e, d); }

  // (x1 + y1 rt)(x2 + y2 rt) with x,y Gaussian rationals.
  friend FieldElement operator*(const FieldElement& x, const FieldElement& y) {
    long d = join_radical(x, y);
    Rational ra = x.a * y.a - x.b * y.b + d * (x.c * y.c - x.e * y.e);
    Rational rb = x.a * y.b + x.b * y.a + d * (x.c * y.e + x.e * y.c);
    Rational rc = x.a * y.c - x.b * y.e + x.c * y.a - x.e * y.b;
    Rational re = x.a * y.e + x.b * y.c + x.c * y.b + x.e * y.a;
    return FieldElement(ra, rb, rc, re, d);
  }
  friend FieldElement operator*(const Rational& r, const FieldElement& x) {
    return FieldElement(r * x.a, r * x.b, r * x.c, r * x.e, x.d);
  }
  friend FieldElement operator*(const FieldElement& x, const Rational& r) { return r * x; }

  FieldElement conj() const { return FieldElement(a, -b, c, -e, d); }       // i -> -i
  FieldElement rad_conj() const { return FieldElement(a, b, -c, -e, d); }   // rt -> -rt

  FieldElement inverse() const {
    if (is_zero()) throw DivisionByZero("field element inverse of zero");
    // 1/(x + y rt) = (x - y rt) / (x^2 - d y^2), then invert the Gaussian part.
    FieldElement num = rad_conj();
    // z = x^2 - d y^2 as a Gaussian rational (za + zb i).
    Rational za = a * a - b * b - d * (c * c - e * e);
    Rational zb = 2 * a * b - d * 2 * c * e;
    Rational nz = za * za + zb * zb;
    if (nz == 0) throw DivisionByZero("field element inverse of zero");
    FieldElement zinv(za / nz, -zb / nz, Rational(0), Rational(0), d);
    return num * zinv;
  }
  friend FieldElement operator/(const FieldElement& x, const FieldElement& y) {
    return x * y.inverse();
  }

  friend bool operator==(const FieldElement& x, const FieldElement& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.e == y.e &&
           (x.radical_free() || y.radical_free() || x.d == y.d);
  }
  friend bool operator!=(const FieldElement& x, const FieldElement& y) { return !(x == y); }

  // Sign of a real element a + c rt (exact; requires is_real()).
  int sign() const {
    if (!is_real()) throw TypeError("sign of a non-real field element");
    int sa = sgn(a), sc = sgn(c);
    if (sc == 0) return sa;
    if (sa == 0) return sc;
    if (sa == sc) return sa;
    Rational lhs = a * a, rhs = Rational(d) * c * c;
    if (lhs == rhs) return 0;  // impossible for nonzero a,c with square-free d
    return lhs > rhs ? sa : sc;
  }
  FieldElement abs_real() const { return sign() < 0 ? -*this : *this; }
  bool less_real(const FieldElement& y) const { return (*this - y).sign() < 0; }

  // Total order for canonical containers (not the real-number order).
  friend bool operator<(const FieldElement& x, const FieldElement& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    if (x.c != y.c) return x.c < y.c;
    return x.e < y.e;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string out;
    auto term = [&](const Rational& r, const char* unit) {
      if (r == 0) return;
      std::string coeff = r.get_str();
      bool neg = coeff[0] == '-';
      if (neg) coeff = coeff.substr(1);
      if (*unit && coeff == "1") coeff.clear();
      std::string body = coeff;
      if (*unit) body += (coeff.empty() ? std::string(unit) : "*" + std::string(unit));
      if (out.empty())
        out = neg ? "-" + body : body;
      else
        out += (neg ? " - " : " + ") + body;
    };
    term(a, "");
    term(b, "i");
    term(c, "rt");
    term(e, "i*rt");
    return out;
  }
};

inline FieldElement operator*(long k, const FieldElement& x) { return rat(k) * x; }

}  // namespace sflab
