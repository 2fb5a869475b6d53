#pragma once

#include "multivector.hpp"
#include "superpoly.hpp"

namespace sflab {

using FMultiVector = MultiVector<FourierScalar>;
using FForm = Form<FourierScalar>;

// Multivectors sit inside the superalgebra on the square chart of TM as
// xi-polynomials, forms as theta-polynomials; tuples are 1-based geometric
// indices, bits 0-based.
inline SuperPoly embed_multivector(const FMultiVector& p) {
  SuperPoly out(square_chart(p.n));
  for (const auto& [t, v] : p.comp) {
    SKey k;
    for (int i : t) k.xi |= 1u << (i - 1);
    out.add_term(k, v);
  }
  return out;
}

inline SuperPoly embed_form(const FForm& w) {
  SuperPoly out(square_chart(w.n));
  for (const auto& [t, v] : w.comp) {
    SKey k;
    for (int i : t) k.th |= 1u << (i - 1);
    out.add_term(k, v);
  }
  return out;
}

inline FMultiVector extract_multivector(const SuperPoly& f) {
  if (f.ch.rank != f.ch.base) throw ChartMismatch("geometric extraction wants a square chart");
  FMultiVector out(f.ch.base);
  for (const auto& [k, v] : f.terms) {
    if (k.th != 0 || !k.p.empty()) throw TypeError("not a pure multivector element");
    std::vector<int> t;
    for (int b = 0; b < 32; ++b)
      if (k.xi & (1u << b)) t.push_back(b + 1);
    out.comp.emplace(t, v);
  }
  return out;
}

inline FForm extract_form(const SuperPoly& f) {
  if (f.ch.rank != f.ch.base) throw ChartMismatch("geometric extraction wants a square chart");
  FForm out(f.ch.base);
  for (const auto& [k, v] : f.terms) {
    if (k.xi != 0 || !k.p.empty()) throw TypeError("not a pure form element");
    std::vector<int> t;
    for (int b = 0; b < 32; ++b)
      if (k.th & (1u << b)) t.push_back(b + 1);
    out.comp.emplace(t, v);
  }
  return out;
}

// e^{ {h, -} } f; terminates because every hat used here strictly shifts the
// weight in one direction.
inline SuperPoly poisson_flow(const SuperPoly& h, const SuperPoly& f, int maxit = 64) {
  SuperPoly out = f;
  SuperPoly term = f;
  for (int m = 1; m <= maxit; ++m) {
    term = super_bracket(h, term) * rat(1, m);
    if (term.is_zero()) return out;
    out += term;
  }
  throw NotPronilpotent("poisson flow did not terminate");
}

// Generator of the standard Courant bracket data on the torus chart.
inline SuperPoly theta_courant(int n) {
  SuperChart c = square_chart(n);
  SuperPoly out(c);
  for (int a = 0; a < n; ++a) out += SuperPoly::theta(c, a) * SuperPoly::momentum(c, a);
  return out;
}

// gamma-hat: the sign makes {gamma_hat, X} = i_X gamma for vector fields X.
inline SuperPoly hat_two_form(const FForm& g) { return -embed_form(g); }

// pi-hat for bivector flows.
inline SuperPoly hat_bivector(const FMultiVector& p) { return embed_multivector(p); }

// Twisted generator: transport theta_courant by the inverse bivector flow,
// then the forward gamma flow.  This pair of directions is the one whose
// derived brackets reproduce [pi,-], the gamma-bracket, and the Courant
// tensor; flipping either flow breaks the unary or the binary bracket.
inline SuperPoly theta_twisted(const FMultiVector& pi, const FForm& gamma) {
  SuperPoly t = theta_courant(pi.n);
  t = poisson_flow(-hat_bivector(pi), t);
  t = poisson_flow(hat_two_form(gamma), t);
  return t;
}

// Iterated bracketing { ... {{Theta, a_1}, a_2} ... , a_k }.
inline SuperPoly derived_iterated(const SuperPoly& theta, const std::vector<SuperPoly>& args) {
  SuperPoly cur = theta;
  for (const auto& a : args) cur = super_bracket(cur, a);
  return cur;
}

// Derived multibrackets on the zero-section side.  The normalization is a
// uniform minus relative to the raw iterated expression: the symmetric Jacobi
// identities force the arity signs s_i s_j to be constant across i+j = n+1,
// and the unary and binary conventions pin s_k = -1 for every k.
inline SuperPoly derived_multibracket_xi(const SuperPoly& theta,
                                         const std::vector<SuperPoly>& args) {
  return -project_xi(derived_iterated(theta, args));
}

// Same, with an optional certification that the generator satisfies the
// structure equations P(Theta) = 0 and {Theta, Theta} = 0.
inline SuperPoly derived_multibrackets(const SuperPoly& theta,
                                       const std::vector<SuperPoly>& args,
                                       bool certify = false) {
  if (args.empty()) throw BadArity("derived multibracket arity must be >= 1");
  if (certify) {
    if (!project_xi(theta).is_zero())
      throw ThetaNotMC("generator has a zero-section component");
    if (!super_bracket(theta, theta).is_zero())
      throw ThetaNotMC("generator does not square to zero");
  }
  for (const auto& a : args)
    if (a != project_xi(a)) throw BadBiDegree("arguments must live on the zero section");
  return derived_multibracket_xi(theta, args);
}

// Interpolation coderivation coefficients M_k for a kernel of bi-degree
// (2,0): the iterated expression P{{...{ {eta, w1}, w2 }, ...}, wk}.
inline SuperPoly taylor_M(const SuperPoly& eta, const std::vector<SuperPoly>& args) {
  if (args.empty()) throw BadArity("taylor coefficient arity must be >= 1");
  for (const auto& [k, v] : eta.terms)
    if (SuperPoly::key_weight(k) != std::make_pair(2, 0))
      throw BadBiDegree("kernel must have bi-degree (2,0)");
  for (const auto& a : args)
    if (a != project_xi(a)) throw BadBiDegree("arguments must live on the zero section");
  return project_xi(derived_iterated(eta, args));
}

// Closed form of the only nonzero coefficient: for homogeneous w1,
//   M_2(w1, w2) = (-1)^{|w1|} sum_{a,b} eta^{ab} (d_xi_a w1)(d_xi_b w2),
// where eta = (1/2) eta^{ab} theta_a theta_b.  Left derivatives throughout.
inline SuperPoly taylor_m2_closed(const SuperPoly& eta, const SuperPoly& w1,
                                  const SuperPoly& w2) {
  SuperPoly out(eta.ch);
  for (const auto& [k, v] : eta.terms) {
    if (SuperPoly::key_weight(k) != std::make_pair(2, 0))
      throw BadBiDegree("kernel must have bi-degree (2,0)");
    std::vector<int> ab;
    for (int b = 0; b < 32; ++b)
      if (k.th & (1u << b)) ab.push_back(b);
    // the (-1)^{|w1|} factor only needs the parity of each w1 part
    SuperPoly w1even(w1.ch), w1odd(w1.ch);
    for (const auto& [kk, vv] : w1.terms)
      (SuperPoly::key_degree(kk) % 2 ? w1odd : w1even).add_term(kk, vv);
    // term v * theta_a theta_b contributes with eta^{ab} = v, eta^{ba} = -v
    for (int swap = 0; swap < 2; ++swap) {
      int a = ab[swap], b = ab[1 - swap];
      SuperPoly de(w1.ch), dodd(w1.ch), db(w1.ch);
      detail::odd_derivative(w1even, detail::OddKind::Xi, a, true, de);
      detail::odd_derivative(w1odd, detail::OddKind::Xi, a, true, dodd);
      detail::odd_derivative(w2, detail::OddKind::Xi, b, true, db);
      out += SuperPoly::fn(eta.ch, swap ? -v : v) * (de - dodd) * db;
    }
  }
  return out;
}

// Closed pair bracket with a bivector kernel:
//   (-1)^{|w1|} sum_{a,b} eta^{ab} i_{e_a} w1 ^ i_{e_b} w2
// extended bilinearly over degree parts.
template <typename S>
Form<S> kernel_pair_form(const Matrix<S>& eta, const Form<S>& w1, const Form<S>& w2) {
  if (eta.rows != w1.n || eta.cols != w1.n) throw DimensionMismatch("kernel matrix size");
  Form<S>::check(w1, w2);
  Form<S> out(w1.n);
  for (int p = 0; p <= w1.top_degree(); ++p) {
    Form<S> w1p = w1.degree_part(p);
    if (w1p.is_zero()) continue;
    int sign = p % 2 ? -1 : 1;
    for (int a = 1; a <= w1.n; ++a)
      for (int b = 1; b <= w1.n; ++b) {
        if (eta.at(a - 1, b - 1).is_zero()) continue;
        Form<S> piece = wedge(theta_derivative(w1p, a), theta_derivative(w2, b)) *
                        eta.at(a - 1, b - 1);
        out += sign > 0 ? piece : -piece;
      }
  }
  return out;
}

inline FForm lemma_m2(const FMultiVector& eta, const FForm& w1, const FForm& w2) {
  return kernel_pair_form(sharp_matrix(eta, FourierScalar::zero(eta.n)), w1, w2);
}

// Same multibracket evaluated scalar-by-scalar: unshuffle expansion of the
// wedge and permutation-sum evaluation of each factor.  Independent of the
// contraction machinery; used as the oracle route.
inline FourierScalar lemma_m2_eval(const FMultiVector& eta, const FForm& w1, const FForm& w2,
                                   const std::vector<FMultiVector>& vs) {
  int n = w1.n;
  FourierScalar zero = FourierScalar::zero(n);
  Matrix<FourierScalar> em = sharp_matrix(eta, zero);
  int p = w1.degree(), q = w2.degree();
  if (p < 0 || q < 0) throw DegreeError("oracle wants homogeneous forms");
  if ((int)vs.size() != p + q - 2) throw LengthMismatch("oracle argument count");
  FourierScalar acc = zero;
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b) {
      if (em.at(a - 1, b - 1).is_zero()) continue;
      // (i_a w1 ^ i_b w2)(v_1..v_{p+q-2}) by (p-1, q-1)-unshuffles
      FourierScalar val = zero;
      for (const Perm& s : unshuffles(p - 1, p + q - 2)) {
        std::vector<FMultiVector> first{FMultiVector::monomial(n, {a},
                                        FourierScalar::constant(n, rat(1)))};
        std::vector<FMultiVector> second{FMultiVector::monomial(n, {b},
                                         FourierScalar::constant(n, rat(1)))};
        for (int j = 0; j < p - 1; ++j) first.push_back(vs[s[j]]);
        for (int j = p - 1; j < p + q - 2; ++j) second.push_back(vs[s[j]]);
        FourierScalar term = eval_form(w1, first, zero) * eval_form(w2, second, zero);
        int sg = permutation_sign(s);
        val = sg > 0 ? val + term : val - term;
      }
      acc += em.at(a - 1, b - 1) * val;
    }
  return p % 2 ? -acc : acc;
}

}  // namespace sflab
