#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fourier.hpp"

namespace sflab {

// Polynomial functions on the graded symplectic manifold T*[2]A[1] attached
// to a chart of a rank-r bundle A over an m-torus:
//   xi_a    degree 1, weight (0,1)   a < r   (odd; the zero-section side)
//   theta_a degree 1, weight (1,0)   a < r   (odd momenta)
//   p_i     degree 2, weight (1,1)   i < m   (even momenta)
// plus trig-polynomial functions of the base angles.  Monomials are kept in
// the canonical order  xi_{a1}..xi_{ak} theta_{b1}..theta_{bl} p^alpha  with
// strictly increasing indices in each odd block.

struct SuperChart {
  int base = 0;  // torus dimension m
  int rank = 0;  // fiber rank r

  friend bool operator==(const SuperChart& a, const SuperChart& b) {
    return a.base == b.base && a.rank == b.rank;
  }
  friend bool operator!=(const SuperChart& a, const SuperChart& b) { return !(a == b); }
};

// Square chart of the tangent-bundle case A = TM.
inline SuperChart square_chart(int n) { return SuperChart{n, n}; }

struct SKey {
  std::uint32_t xi = 0, th = 0;
  std::vector<int> p;  // exponent per base index; trailing zeros trimmed away

  friend bool operator<(const SKey& x, const SKey& y) {
    if (x.xi != y.xi) return x.xi < y.xi;
    if (x.th != y.th) return x.th < y.th;
    return x.p < y.p;
  }
  friend bool operator==(const SKey& x, const SKey& y) {
    return x.xi == y.xi && x.th == y.th && x.p == y.p;
  }
};

inline int popcount32(std::uint32_t m) { return std::popcount(m); }

// #{(a,b) : a in A, b in B, a > b} mod 2 controls the interleaving sign.
inline int cross_inversions(std::uint32_t ma, std::uint32_t mb) {
  int inv = 0;
  for (int b = 0; b < 32; ++b)
    if (mb & (1u << b)) inv += popcount32(ma & ~((2u << b) - 1));
  return inv;
}

struct SuperPoly {
  SuperChart ch;
  std::map<SKey, FourierScalar> terms;

  SuperPoly() = default;
  explicit SuperPoly(SuperChart c) : ch(c) {}

  static SuperPoly zero(SuperChart c) { return SuperPoly(c); }
  static SuperPoly fn(SuperChart c, const FourierScalar& f) {
    if (f.n != c.base) throw ChartMismatch("scalar dimension vs chart base");
    SuperPoly out(c);
    if (!f.is_zero()) out.terms[SKey{}] = f;
    return out;
  }
  static SuperPoly constant(SuperChart c, const Rational& r) {
    return fn(c, FourierScalar::constant(c.base, r));
  }
  static SuperPoly xi(SuperChart c, int a) {
    if (a < 0 || a >= c.rank) throw AxisOutOfRange("xi index vs chart rank");
    SuperPoly out(c);
    out.terms[SKey{1u << a, 0, {}}] = FourierScalar::constant(c.base, rat(1));
    return out;
  }
  static SuperPoly theta(SuperChart c, int a) {
    if (a < 0 || a >= c.rank) throw AxisOutOfRange("theta index vs chart rank");
    SuperPoly out(c);
    out.terms[SKey{0, 1u << a, {}}] = FourierScalar::constant(c.base, rat(1));
    return out;
  }
  static SuperPoly momentum(SuperChart c, int a) {
    if (a < 0 || a >= c.base) throw AxisOutOfRange("momentum index vs chart base");
    SuperPoly out(c);
    std::vector<int> p(a + 1, 0);
    p[a] = 1;
    out.terms[SKey{0, 0, p}] = FourierScalar::constant(c.base, rat(1));
    return out;
  }

  bool is_zero() const { return terms.empty(); }

  static int key_degree(const SKey& k) {
    int d = popcount32(k.xi) + popcount32(k.th);
    for (int e : k.p) d += 2 * e;
    return d;
  }
  // (theta+p, xi+p) weight
  static std::pair<int, int> key_weight(const SKey& k) {
    int pdeg = 0;
    for (int e : k.p) pdeg += e;
    return {popcount32(k.th) + pdeg, popcount32(k.xi) + pdeg};
  }

  // -1 for inhomogeneous or zero
  int degree() const {
    int d = -1;
    for (const auto& [k, v] : terms) {
      int kd = key_degree(k);
      if (d == -1)
        d = kd;
      else if (d != kd)
        return -1;
    }
    return d;
  }
  bool is_homogeneous() const { return terms.empty() || degree() >= 0; }

  SuperPoly weight_part(int wth, int wxi) const {
    SuperPoly out(ch);
    for (const auto& [k, v] : terms)
      if (key_weight(k) == std::make_pair(wth, wxi)) out.terms.emplace(k, v);
    return out;
  }

  void add_term(const SKey& k, const FourierScalar& v) {
    if (v.is_zero()) return;
    auto it = terms.find(k);
    if (it == terms.end()) {
      terms.emplace(k, v);
      return;
    }
    it->second += v;
    if (it->second.is_zero()) terms.erase(it);
  }

  static void check_chart(const SuperPoly& f, const SuperPoly& g) {
    if (f.ch != g.ch) throw ChartMismatch("superpoly chart");
  }

  SuperPoly& operator+=(const SuperPoly& g) {
    check_chart(*this, g);
    for (const auto& [k, v] : g.terms) add_term(k, v);
    return *this;
  }
  friend SuperPoly operator+(SuperPoly f, const SuperPoly& g) { return f += g; }
  SuperPoly operator-() const {
    SuperPoly out(ch);
    for (const auto& [k, v] : terms) out.terms.emplace(k, -v);
    return out;
  }
  friend SuperPoly operator-(const SuperPoly& f, const SuperPoly& g) { return f + (-g); }
  friend SuperPoly operator*(const SuperPoly& f, const FieldElement& s) {
    SuperPoly out(f.ch);
    if (s.is_zero()) return out;
    for (const auto& [k, v] : f.terms) out.terms.emplace(k, v * s);
    return out;
  }
  friend SuperPoly operator*(const FieldElement& s, const SuperPoly& f) { return f * s; }
  friend SuperPoly operator*(const SuperPoly& f, const Rational& r) {
    return f * FieldElement(r);
  }
  friend bool operator==(const SuperPoly& f, const SuperPoly& g) {
    return f.ch == g.ch && f.terms == g.terms;
  }
  friend bool operator!=(const SuperPoly& f, const SuperPoly& g) { return !(f == g); }

  friend SuperPoly operator*(const SuperPoly& f, const SuperPoly& g) {
    check_chart(f, g);
    SuperPoly out(f.ch);
    for (const auto& [k1, v1] : f.terms)
      for (const auto& [k2, v2] : g.terms) {
        if ((k1.xi & k2.xi) || (k1.th & k2.th)) continue;  // odd square = 0
        // sign: xi2 block crosses theta1 block, then merge within blocks
        int inv = popcount32(k2.xi) * popcount32(k1.th);
        inv += cross_inversions(k1.xi, k2.xi);
        inv += cross_inversions(k1.th, k2.th);
        SKey k;
        k.xi = k1.xi | k2.xi;
        k.th = k1.th | k2.th;
        k.p.resize(std::max(k1.p.size(), k2.p.size()), 0);
        for (size_t j = 0; j < k1.p.size(); ++j) k.p[j] += k1.p[j];
        for (size_t j = 0; j < k2.p.size(); ++j) k.p[j] += k2.p[j];
        while (!k.p.empty() && k.p.back() == 0) k.p.pop_back();
        FourierScalar v = v1 * v2;
        out.add_term(k, inv % 2 ? -v : v);
      }
    return out;
  }
};

namespace detail {

enum class OddKind { Xi, Theta };

// Left/right derivatives by one odd generator; evens (p, x) need no signs.
inline void odd_derivative(const SuperPoly& f, OddKind kind, int a, bool from_left,
                           SuperPoly& out) {
  std::uint32_t bit = 1u << a;
  for (const auto& [k, v] : f.terms) {
    std::uint32_t mask = (kind == OddKind::Xi) ? k.xi : k.th;
    if (!(mask & bit)) continue;
    int before_in_block = popcount32(mask & (bit - 1));
    int after_in_block = popcount32(mask & ~((2u << a) - 1));
    int inv;
    if (from_left)
      inv = before_in_block + ((kind == OddKind::Theta) ? popcount32(k.xi) : 0);
    else
      inv = after_in_block + ((kind == OddKind::Xi) ? popcount32(k.th) : 0);
    SKey nk = k;
    if (kind == OddKind::Xi)
      nk.xi &= ~bit;
    else
      nk.th &= ~bit;
    out.add_term(nk, inv % 2 ? -v : v);
  }
}

inline SuperPoly d_p(const SuperPoly& f, int a) {
  SuperPoly out(f.ch);
  for (const auto& [k, v] : f.terms) {
    if ((int)k.p.size() <= a || k.p[a] == 0) continue;
    SKey nk = k;
    nk.p[a] -= 1;
    while (!nk.p.empty() && nk.p.back() == 0) nk.p.pop_back();
    out.add_term(nk, v * rat(k.p[a]));
  }
  return out;
}

inline SuperPoly d_x(const SuperPoly& f, int a) {
  SuperPoly out(f.ch);
  for (const auto& [k, v] : f.terms) out.add_term(k, v.partial(a + 1));
  return out;
}

}  // namespace detail

// Canonical Poisson bracket, degree -2 (weight (-1,-1)).  Conventions are
// pinned by the generator and Leibniz/Jacobi tests:
//   {p_a, f(x)} = df/dx_a,   {theta_a, xi_b} = {xi_a, theta_b} = delta_ab.
inline SuperPoly super_bracket(const SuperPoly& f, const SuperPoly& g) {
  SuperPoly::check_chart(f, g);
  SuperPoly out(f.ch);
  using detail::OddKind;
  for (int a = 0; a < f.ch.base; ++a)
    out += detail::d_p(f, a) * detail::d_x(g, a) - detail::d_x(f, a) * detail::d_p(g, a);
  for (int a = 0; a < f.ch.rank; ++a) {
    SuperPoly rf_th(f.ch), lf_xi(f.ch), rf_xi(f.ch), lf_th(f.ch);
    detail::odd_derivative(f, OddKind::Theta, a, false, rf_th);
    detail::odd_derivative(g, OddKind::Xi, a, true, lf_xi);
    detail::odd_derivative(f, OddKind::Xi, a, false, rf_xi);
    detail::odd_derivative(g, OddKind::Theta, a, true, lf_th);
    out += rf_th * lf_xi + rf_xi * lf_th;
  }
  return out;
}

// Restriction to the zero section (functions of x and xi only).
inline SuperPoly project_xi(const SuperPoly& f) {
  SuperPoly out(f.ch);
  for (const auto& [k, v] : f.terms)
    if (k.th == 0 && k.p.empty()) out.terms.emplace(k, v);
  return out;
}

inline SuperPoly restrict_P(const SuperPoly& f) { return project_xi(f); }

// Projection onto the momentum-leg side (functions of x and theta only).
inline SuperPoly project_theta(const SuperPoly& f) {
  SuperPoly out(f.ch);
  for (const auto& [k, v] : f.terms)
    if (k.xi == 0 && k.p.empty()) out.terms.emplace(k, v);
  return out;
}

}  // namespace sflab
