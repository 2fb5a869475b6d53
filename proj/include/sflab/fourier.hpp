#pragma once

#include <map>
#include <string>
#include <vector>

#include "field.hpp"

namespace sflab {

// Trigonometric polynomial on the n-torus in the exponential basis:
//   f = sum_k c_k exp(i k.theta),  k in Z^n, finitely many c_k != 0.
// Real-valued f satisfy c_{-k} = conj(c_k); that is a checkable predicate
// (and asserted where setups commit data), not a constructor invariant,
// since exp atoms themselves are not real.
struct FourierScalar {
  int n = 0;
  std::map<std::vector<long>, FieldElement> c;

  FourierScalar() = default;
  explicit FourierScalar(int axes) : n(axes) {}

  static FourierScalar zero(int n) { return FourierScalar(n); }
  static FourierScalar constant(int n, const FieldElement& v) {
    FourierScalar f(n);
    if (!v.is_zero()) f.c[std::vector<long>(n, 0)] = v;
    return f;
  }
  static FourierScalar constant(int n, const Rational& v) {
    return constant(n, FieldElement(v));
  }
  static FourierScalar exp_mode(int n, const std::vector<long>& k) {
    if ((int)k.size() != n) throw DimensionMismatch("exp mode length");
    FourierScalar f(n);
    f.c[k] = FieldElement::one();
    return f;
  }
  static FourierScalar cos_mode(int n, const std::vector<long>& k) {
    FourierScalar f = exp_mode(n, k) * FieldElement(rat(1, 2));
    std::vector<long> mk(k);
    for (auto& x : mk) x = -x;
    f += exp_mode(n, mk) * FieldElement(rat(1, 2));
    return f;
  }
  static FourierScalar sin_mode(int n, const std::vector<long>& k) {
    // sin = (e^{ik} - e^{-ik}) / (2i)
    FieldElement half_over_i(rat(0), rat(-1, 2), rat(0), rat(0));
    FourierScalar f = exp_mode(n, k) * half_over_i;
    std::vector<long> mk(k);
    for (auto& x : mk) x = -x;
    f += exp_mode(n, mk) * (-half_over_i);
    return f;
  }

  bool is_zero() const { return c.empty(); }
  bool is_constant() const {
    return c.empty() || (c.size() == 1 && c.begin()->first == std::vector<long>(n, 0));
  }
  FieldElement constant_part() const {
    auto it = c.find(std::vector<long>(n, 0));
    return it == c.end() ? FieldElement::zero() : it->second;
  }
  bool is_real() const {
    for (const auto& [k, v] : c) {
      std::vector<long> mk(k);
      for (auto& x : mk) x = -x;
      auto it = c.find(mk);
      if (it == c.end() || !(it->second == v.conj())) return false;
    }
    return true;
  }

  void add_term(const std::vector<long>& k, const FieldElement& v) {
    if ((int)k.size() != n) throw DimensionMismatch("fourier mode length");
    auto it = c.find(k);
    if (it == c.end()) {
      if (!v.is_zero()) c.emplace(k, v);
      return;
    }
    it->second = it->second + v;
    if (it->second.is_zero()) c.erase(it);
  }

  static void check_axes(const FourierScalar& f, const FourierScalar& g) {
    if (f.n != g.n) throw DimensionMismatch("fourier axis count");
  }

  FourierScalar& operator+=(const FourierScalar& g) {
    check_axes(*this, g);
    for (const auto& [k, v] : g.c) add_term(k, v);
    return *this;
  }
  friend FourierScalar operator+(FourierScalar f, const FourierScalar& g) { return f += g; }
  FourierScalar operator-() const {
    FourierScalar f(n);
    for (const auto& [k, v] : c) f.c.emplace(k, -v);
    return f;
  }
  friend FourierScalar operator-(const FourierScalar& f, const FourierScalar& g) {
    return f + (-g);
  }
  friend FourierScalar operator*(const FourierScalar& f, const FieldElement& s) {
    FourierScalar out(f.n);
    if (s.is_zero()) return out;
    for (const auto& [k, v] : f.c) out.c.emplace(k, v * s);
    return out;
  }
  friend FourierScalar operator*(const FieldElement& s, const FourierScalar& f) { return f * s; }
  friend FourierScalar operator*(const FourierScalar& f, const Rational& r) {
    return f * FieldElement(r);
  }
  friend FourierScalar operator*(const FourierScalar& f, const FourierScalar& g) {
    check_axes(f, g);
    FourierScalar out(f.n);
    for (const auto& [k1, v1] : f.c)
      for (const auto& [k2, v2] : g.c) {
        std::vector<long> k(k1);
        for (int j = 0; j < f.n; ++j) k[j] += k2[j];
        out.add_term(k, v1 * v2);
      }
    return out;
  }
  friend bool operator==(const FourierScalar& f, const FourierScalar& g) {
    return f.n == g.n && f.c == g.c;
  }
  friend bool operator!=(const FourierScalar& f, const FourierScalar& g) { return !(f == g); }

  // d/d theta_axis (axis is 1-based): mode k picks up a factor i*k_axis.
  FourierScalar partial(int axis) const {
    if (axis < 1 || axis > n) throw AxisOutOfRange("fourier partial axis");
    FourierScalar out(n);
    for (const auto& [k, v] : c) {
      long ka = k[axis - 1];
      if (ka == 0) continue;
      out.c.emplace(k, FieldElement::imag() * rat(ka) * v);
    }
    return out;
  }

  FourierScalar conj_value() const {
    FourierScalar out(n);
    for (const auto& [k, v] : c) {
      std::vector<long> mk(k);
      for (auto& x : mk) x = -x;
      out.c.emplace(mk, v.conj());
    }
    return out;
  }

  // Exact evaluation at the quarter-turn point theta_j = q_j * pi/2:
  // exp(i k.theta) = i^{(k.q) mod 4}.
  FieldElement eval_quarter(const std::vector<int>& q) const {
    if ((int)q.size() != n) throw DimensionMismatch("quarter point length");
    FieldElement out;
    for (const auto& [k, v] : c) {
      long dot = 0;
      for (int j = 0; j < n; ++j) dot += k[j] * q[j];
      int r = (int)(((dot % 4) + 4) % 4);
      static const int re[4] = {1, 0, -1, 0};
      static const int im[4] = {0, 1, 0, -1};
      out = out + FieldElement(rat(re[r]), rat(im[r]), rat(0), rat(0)) * v;
    }
    return out;
  }

  std::string str() const {
    if (c.empty()) return "0";
    std::string out;
    for (const auto& [k, v] : c) {
      bool is_const = true;
      for (long x : k)
        if (x != 0) is_const = false;
      std::string coeff = v.str();
      bool needs_paren = coeff.find(' ') != std::string::npos;
      std::string body;
      if (is_const) {
        body = needs_paren ? "(" + coeff + ")" : coeff;
      } else {
        std::string atom = "exp(";
        for (int j = 0; j < n; ++j) atom += (j ? "," : "") + std::to_string(k[j]);
        atom += ")";
        if (coeff == "1")
          body = atom;
        else if (coeff == "-1")
          body = "-" + atom;
        else
          body = (needs_paren ? "(" + coeff + ")" : coeff) + "*" + atom;
      }
      if (out.empty())
        out = body;
      else if (!body.empty() && body[0] == '-')
        out += " - " + body.substr(1);
      else
        out += " + " + body;
    }
    return out;
  }
};

}  // namespace sflab
