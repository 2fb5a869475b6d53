#pragma once

#include <optional>

#include "vdata.hpp"

namespace sflab {

// A regular Poisson torus with a chosen complement to the symplectic
// distribution: frame columns are first the 2k leafwise directions, then the
// complement.  The frame must be invertible over the trig-polynomial ring.
struct TorusPoissonSetup {
  int n = 0;     // torus dimension
  int leaf = 0;  // 2k
  FMultiVector pi;
  Matrix<FourierScalar> frame, coframe;  // A and A^{-1}
  Matrix<FourierScalar> pr_tf, pr_g;     // projections along the splitting
  Matrix<FourierScalar> pi_sharp;        // bivector matrix, pi# a = M a
  Matrix<FourierScalar> gamma_mat;       // induced leafwise two-form, extended by zero on G
  FForm gamma;

  FourierScalar fzero() const { return FourierScalar::zero(n); }
  FourierScalar fone() const { return FourierScalar::constant(n, rat(1)); }
};

// zeta_i -> sum_j (A^{-T})_{ij} zeta'_j rewrites components into the frame
// basis; the transpose pair undoes it.
template <typename S>
MultiVector<S> to_frame(const MultiVector<S>& p, const Matrix<S>& coframe) {
  return substitute(p, coframe.transpose());
}
template <typename S>
MultiVector<S> from_frame(const MultiVector<S>& p, const Matrix<S>& frame) {
  return substitute(p, frame.transpose());
}

inline std::vector<std::vector<int>> quarter_grid(int n) {
  std::vector<std::vector<int>> pts;
  std::vector<int> q(n, 0);
  while (true) {
    pts.push_back(q);
    int j = 0;
    while (j < n && q[j] == 3) q[j++] = 0;
    if (j == n) break;
    ++q[j];
  }
  return pts;
}

inline TorusPoissonSetup make_setup(int n, int leaf, const FMultiVector& pi,
                                    const Matrix<FourierScalar>& frame) {
  TorusPoissonSetup s;
  s.n = n;
  s.leaf = leaf;
  s.pi = pi;
  s.frame = frame;
  FourierScalar z = FourierScalar::zero(n), one = FourierScalar::constant(n, rat(1));

  if (frame.rows != n || frame.cols != n) throw DimensionMismatch("frame must be n x n");
  if (!schouten(pi, pi).is_zero()) throw SemanticError("bivector is not Poisson");
  s.coframe = matrix_inverse_fourier(frame);  // NotInvertible on a degenerate frame

  Matrix<FourierScalar> d(n, n, z);
  for (int i = 0; i < leaf; ++i) d.at(i, i) = one;
  s.pr_tf = frame * d * s.coframe;
  s.pr_g = identity_matrix(n, z, one) - s.pr_tf;

  s.pi_sharp = sharp_matrix(pi, z);
  if (!(s.pr_tf * s.pi_sharp - s.pi_sharp).is_zero())
    throw SemanticError("leaf frame does not span the image of pi#");

  // leafwise block of pi in the frame basis
  FMultiVector pf = to_frame(pi, s.coframe);
  Matrix<FourierScalar> pfm = sharp_matrix(pf, z);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((i >= leaf || j >= leaf) && !pfm.at(i, j).is_zero())
        throw SemanticError("pi has components outside the leaf block");
  Matrix<FourierScalar> block(leaf, leaf, z);
  for (int i = 0; i < leaf; ++i)
    for (int j = 0; j < leaf; ++j) block.at(i, j) = pfm.at(i, j);

  Matrix<FourierScalar> w = -matrix_inverse_fourier(block);
  Matrix<FourierScalar> c(leaf, n, z);  // leaf coframe rows
  for (int i = 0; i < leaf; ++i)
    for (int j = 0; j < n; ++j) c.at(i, j) = s.coframe.at(i, j);
  s.gamma_mat = c.transpose() * w * c;
  s.gamma = two_form_from_matrix(s.gamma_mat);

  // structural identities of the splitting data
  if (!(s.pr_tf * s.pr_tf - s.pr_tf).is_zero()) throw SemanticError("projector is not idempotent");
  if (!(s.pi_sharp * s.gamma_mat + s.pr_tf).is_zero())
    throw SemanticError("gamma does not invert pi on the leaves");
  if (!(s.gamma_mat * s.pr_g).is_zero()) throw SemanticError("gamma does not annihilate G");

  for (const auto& q : quarter_grid(n)) {
    Matrix<FieldElement> m(n, n, FieldElement::zero());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.at(i, j) = s.pi_sharp.at(i, j).eval_quarter(q);
    if (matrix_rank(m) != leaf) throw SemanticError("pi# rank differs from 2k at a sample");
  }
  return s;
}

// Z is good when, rewritten in the frame basis, every monomial carries at
// most one complement leg.  On failure returns an offending frame tuple
// (1-based, entries <= leaf are leafwise) and its coefficient; any two of its
// entries > leaf name a conormal pair that detects the failure.
struct GoodWitness {
  std::vector<int> frame_tuple;
  FourierScalar value;
};

inline std::optional<GoodWitness> good_witness(const TorusPoissonSetup& s,
                                               const FMultiVector& z) {
  FMultiVector zf = to_frame(z, s.coframe);
  for (const auto& [t, v] : zf.comp) {
    if (v.is_zero()) continue;
    int complement = 0;
    for (int i : t)
      if (i > s.leaf) ++complement;
    if (complement >= 2) return GoodWitness{t, v};
  }
  return std::nullopt;
}

inline bool is_good(const TorusPoissonSetup& s, const FMultiVector& z) {
  return !good_witness(s, z).has_value();
}

// Split a multivector by (leaf count, complement count) in the frame basis.
inline std::map<std::pair<int, int>, FMultiVector> bigrade_decompose(
    const TorusPoissonSetup& s, const FMultiVector& p) {
  FMultiVector pf = to_frame(p, s.coframe);
  std::map<std::pair<int, int>, FMultiVector> parts;
  for (const auto& [t, v] : pf.comp) {
    int lf = 0;
    for (int i : t)
      if (i <= s.leaf) ++lf;
    std::pair<int, int> key{lf, (int)t.size() - lf};
    auto it = parts.find(key);
    if (it == parts.end()) it = parts.emplace(key, FMultiVector(s.n)).first;
    it->second.add_term(t, v);
  }
  std::map<std::pair<int, int>, FMultiVector> out;
  for (auto& [key, part] : parts) out.emplace(key, from_frame(part, s.frame));
  return out;
}

// ---- shipped setups ----

// T^3 with the Kronecker foliation of slope sqrt(2): pi = (e1 + rt e2) ^ e3,
// complement either e2 (primary) or e2 + e3 (alternate).
inline TorusPoissonSetup setup_t3_kronecker(bool alternate_complement = false) {
  int n = 3;
  FourierScalar z = FourierScalar::zero(n), one = FourierScalar::constant(n, rat(1));
  FourierScalar lam = FourierScalar::constant(n, FieldElement::root(2));
  FMultiVector pi(n);
  pi.add_term({1, 3}, one);       // e1^e3
  pi.add_term({2, 3}, lam);       // rt e2^e3
  Matrix<FourierScalar> a(n, n, z);
  // columns: u = e1 + rt e2, e3, then the complement
  a.at(0, 0) = one;
  a.at(1, 0) = lam;
  a.at(2, 1) = one;
  a.at(1, 2) = one;
  if (alternate_complement) a.at(2, 2) = one;  // e2 + e3
  return make_setup(n, 2, pi, a);
}

// T^4 with pi = e1^e2 and a complement tilted by trig coefficients, chosen
// so that the complement is non-involutive (the ternary bracket survives).
inline TorusPoissonSetup setup_t4(bool alternate_complement = false) {
  int n = 4;
  FourierScalar z = FourierScalar::zero(n), one = FourierScalar::constant(n, rat(1));
  FMultiVector pi(n);
  pi.add_term({1, 2}, one);
  Matrix<FourierScalar> a(n, n, z);
  a.at(0, 0) = one;
  a.at(1, 1) = one;
  a.at(2, 2) = one;
  a.at(3, 3) = one;
  if (!alternate_complement) {
    a.at(0, 2) = FourierScalar::sin_mode(n, {0, 0, 0, 1});  // g1 = e3 + sin(t4) e1
  } else {
    a.at(1, 3) = FourierScalar::cos_mode(n, {0, 0, 1, 0});  // g2 = e4 + cos(t3) e2
  }
  return make_setup(n, 2, pi, a);
}

}  // namespace sflab
