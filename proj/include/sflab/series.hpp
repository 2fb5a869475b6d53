#pragma once

#include <functional>
#include <vector>

#include "errors.hpp"

namespace sflab {

// Truncated formal power series in a deformation parameter eps:
//   A = A_0 + A_1 eps + ... + A_K eps^K,  exact coefficients of type T.
// All arithmetic is modulo eps^{K+1}; operands must share the order K.
template <typename T>
struct EpsSeries {
  int order = 0;
  std::vector<T> a;  // size order + 1

  EpsSeries() = default;
  EpsSeries(int k, const T& zero) : order(k), a(k + 1, zero) {}
  explicit EpsSeries(std::vector<T> coeffs)
      : order((int)coeffs.size() - 1), a(std::move(coeffs)) {
    if (a.empty()) throw LengthMismatch("empty series");
  }

  const T& operator[](int j) const { return a.at(j); }
  T& operator[](int j) { return a.at(j); }

  static void check(const EpsSeries& x, const EpsSeries& y) {
    if (x.order != y.order) throw LengthMismatch("series truncation orders differ");
  }

  friend EpsSeries operator+(const EpsSeries& x, const EpsSeries& y) {
    check(x, y);
    EpsSeries out = x;
    for (int j = 0; j <= x.order; ++j) out.a[j] = out.a[j] + y.a[j];
    return out;
  }
  friend EpsSeries operator-(const EpsSeries& x, const EpsSeries& y) {
    check(x, y);
    EpsSeries out = x;
    for (int j = 0; j <= x.order; ++j) out.a[j] = out.a[j] - y.a[j];
    return out;
  }
  EpsSeries operator-() const {
    EpsSeries out = *this;
    for (auto& v : out.a) v = -v;
    return out;
  }
  friend bool operator==(const EpsSeries& x, const EpsSeries& y) {
    return x.order == y.order && x.a == y.a;
  }
  friend bool operator!=(const EpsSeries& x, const EpsSeries& y) { return !(x == y); }

  template <typename F>
  auto map(F f) const -> EpsSeries<decltype(f(a[0]))> {
    std::vector<decltype(f(a[0]))> out;
    out.reserve(a.size());
    for (const auto& v : a) out.push_back(f(v));
    return EpsSeries<decltype(f(a[0]))>(std::move(out));
  }

  // Shift by one power of eps, dropping the top coefficient.
  EpsSeries shift_up(const T& zero) const {
    EpsSeries out(order, zero);
    for (int j = 1; j <= order; ++j) out.a[j] = a[j - 1];
    return out;
  }

  bool all_zero(const std::function<bool(const T&)>& is_zero) const {
    for (const auto& v : a)
      if (!is_zero(v)) return false;
    return true;
  }
};

// C_k = sum_{i+j=k} F(A_i, B_j), truncated at the shared order.
template <typename A, typename B, typename F>
auto series_bilinear(F f, const EpsSeries<A>& x, const EpsSeries<B>& y)
    -> EpsSeries<decltype(f(x[0], y[0]))> {
  if (x.order != y.order) throw LengthMismatch("series truncation orders differ");
  using C = decltype(f(x[0], y[0]));
  std::vector<C> out;
  for (int k = 0; k <= x.order; ++k) {
    C acc = f(x[0], y[k]);
    for (int i = 1; i <= k; ++i) acc = acc + f(x[i], y[k - i]);
    out.push_back(acc);
  }
  return EpsSeries<C>(std::move(out));
}

template <typename A, typename F>
auto series_trilinear(F f, const EpsSeries<A>& x, const EpsSeries<A>& y, const EpsSeries<A>& z)
    -> EpsSeries<decltype(f(x[0], y[0], z[0]))> {
  if (x.order != y.order || x.order != z.order)
    throw LengthMismatch("series truncation orders differ");
  using C = decltype(f(x[0], y[0], z[0]));
  std::vector<C> out;
  for (int k = 0; k <= x.order; ++k) {
    C acc = f(x[0], y[0], z[k]);
    bool first = true;
    for (int i = 0; i <= k; ++i)
      for (int j = 0; i + j <= k; ++j) {
        if (first) {
          first = false;
          continue;  // (0,0,k) already seeded
        }
        acc = acc + f(x[i], y[j], z[k - i - j]);
      }
    out.push_back(acc);
  }
  return EpsSeries<C>(std::move(out));
}

// Multiplicative inverse of S = S_0 + eps S_1 + ... with S_0 == identity,
// via the terminating Neumann series sum_m (identity - S)^m.
// mul: (T,T) -> T, identity: the unit of the coefficient ring.
template <typename T, typename M>
EpsSeries<T> series_geometric_inverse(const EpsSeries<T>& s, const T& identity, M mul) {
  if (!(s[0] == identity)) throw NonUnitLeadingTerm("series leading term is not the identity");
  int K = s.order;
  EpsSeries<T> n = -s;  // N = -(S - I): N_0 = 0 after adding I back
  n.a[0] = n.a[0] + identity;
  EpsSeries<T> out = s;
  for (int j = 0; j <= K; ++j) out.a[j] = (j == 0) ? identity : n.a[j];
  EpsSeries<T> power = n;  // N^1
  for (int m = 2; m <= K; ++m) {
    power = series_bilinear(mul, power, n);
    for (int j = 0; j <= K; ++j) out.a[j] = out.a[j] + power.a[j];
  }
  // out = I + N + N^2 + ... = (I - N)^{-1} = S^{-1}
  return out;
}

// Evaluate at a scalar value of eps; smul: (coeff_scalar, T) -> T.
template <typename T, typename S, typename M>
T series_eval(const EpsSeries<T>& x, const S& eps, M smul) {
  T acc = x[x.order];
  for (int j = x.order - 1; j >= 0; --j) acc = smul(eps, acc) + x[j];
  return acc;
}

}  // namespace sflab
