#pragma once

#include <vector>

#include "errors.hpp"

namespace sflab {

// Polynomial in the flow time t with coefficients of type T.  Used for the
// one-parameter families on the product manifold; degrees stay small and are
// guarded by an explicit bound at the call sites that require one.
template <typename T>
struct TPoly {
  std::vector<T> a;  // a[j] multiplies t^j; empty vector is the zero polynomial

  TPoly() = default;
  explicit TPoly(std::vector<T> coeffs) : a(std::move(coeffs)) { trim(); }
  static TPoly constant(const T& v) { return TPoly(std::vector<T>{v}); }

  void trim() {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
  }
  bool is_zero() const { return a.empty(); }
  int degree() const { return (int)a.size() - 1; }  // -1 for zero
  const T& coeff(int j, const T& zero) const { return j < (int)a.size() ? a[j] : zero; }

  friend TPoly operator+(const TPoly& x, const TPoly& y) {
    TPoly out;
    size_t n = std::max(x.a.size(), y.a.size());
    out.a.reserve(n);
    for (size_t j = 0; j < n; ++j) {
      if (j < x.a.size() && j < y.a.size())
        out.a.push_back(x.a[j] + y.a[j]);
      else if (j < x.a.size())
        out.a.push_back(x.a[j]);
      else
        out.a.push_back(y.a[j]);
    }
    out.trim();
    return out;
  }
  TPoly operator-() const {
    TPoly out;
    out.a.reserve(a.size());
    for (const auto& v : a) out.a.push_back(-v);
    return out;
  }
  friend TPoly operator-(const TPoly& x, const TPoly& y) { return x + (-y); }
  friend TPoly operator*(const TPoly& x, const TPoly& y) {
    TPoly out;
    if (x.is_zero() || y.is_zero()) return out;
    // seed with correctly-shaped zeros from a product term
    out.a.assign(x.a.size() + y.a.size() - 1, x.a[0] * y.a[0]);
    for (auto& v : out.a) v = v - v;
    for (size_t i = 0; i < x.a.size(); ++i)
      for (size_t j = 0; j < y.a.size(); ++j) out.a[i + j] = out.a[i + j] + x.a[i] * y.a[j];
    out.trim();
    return out;
  }
  friend bool operator==(const TPoly& x, const TPoly& y) { return x.a == y.a; }
  friend bool operator!=(const TPoly& x, const TPoly& y) { return !(x == y); }

  TPoly dt() const {  // d/dt
    TPoly out;
    for (size_t j = 1; j < a.size(); ++j) {
      T v = a[j];
      for (size_t m = 1; m < j; ++m) v = v + a[j];  // j * a[j] without scalar deps
      out.a.push_back(v);
    }
    out.trim();
    return out;
  }

  template <typename S, typename M>
  T eval(const S& t, M smul, const T& zero) const {
    if (a.empty()) return zero;
    T acc = a.back();
    for (int j = (int)a.size() - 2; j >= 0; --j) acc = smul(t, acc) + a[j];
    return acc;
  }

  void require_degree_at_most(int bound) const {
    if (degree() > bound) throw DegreeBoundExceeded("t-degree exceeds bound");
  }
};

}  // namespace sflab
