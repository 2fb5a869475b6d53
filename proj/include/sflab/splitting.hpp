#pragma once

#include "deform.hpp"
#include "linfty.hpp"

namespace sflab {

// Change-of-splitting data between two complements of the same foliation:
// the eps map grading G1 over G0, the fiberwise bivector eta on the graph of
// pi (coefficients in the frame iota_{e^i} Pi + e^i), and its transport xi.
struct SplittingPair {
  TorusPoissonSetup s0, s1;
  Matrix<FourierScalar> eps_map;  // kills TF, sends G0 into TF
  Matrix<FourierScalar> eta;
  Matrix<FourierScalar> xi_mat;
  FForm xi;
};

namespace detail {

inline FourierScalar dot(const Matrix<FourierScalar>& a, int col_a,
                         const Matrix<FourierScalar>& b, int col_b) {
  FourierScalar out = a.at(0, col_a) * b.at(0, col_b);
  for (int i = 1; i < a.rows; ++i) out += a.at(i, col_a) * b.at(i, col_b);
  return out;
}

}  // namespace detail

inline SplittingPair change_of_splitting(const TorusPoissonSetup& s0,
                                         const TorusPoissonSetup& s1) {
  if (s0.n != s1.n || s0.leaf != s1.leaf) throw DimensionMismatch("splitting pair shapes");
  if (!(s0.pi == s1.pi)) throw SemanticError("complements deform different Poisson structures");
  int n = s0.n, leaf = s0.leaf;
  FourierScalar fz = s0.fzero();
  Matrix<FourierScalar> id = identity_matrix(n, fz, s0.fone());

  SplittingPair sp;
  sp.s0 = s0;
  sp.s1 = s1;
  // G1 = gr(eps): for Y in G0 the TF-part of its G1-representative along TF
  sp.eps_map = (s1.pr_g - id) * s0.pr_g;
  if (!(s0.pr_tf * sp.eps_map - sp.eps_map).is_zero())
    throw SemanticError("eps map does not land in the leaf distribution");

  // first-slot flats and sharps: iota_V gamma = -gamma_mat V, iota_a Pi = -pi_sharp a
  Matrix<FourierScalar> flat = -s0.gamma_mat;

  // eta# through the identification psi: on X + beta in G0 (+) G0^0,
  //   delta = -flat(eps X) + eps^T (flat(eps X) - beta),
  // paired against the graph frame through c = X + pi_sharp beta, and
  // delta = -eta c determines the coefficient matrix.
  Matrix<FourierScalar> cmat(n, n, fz), dmat(n, n, fz);
  for (int j = 0; j < n; ++j) {
    Matrix<FourierScalar> x(n, 1, fz), beta(n, 1, fz);
    if (j >= leaf) {
      for (int i = 0; i < n; ++i) x.at(i, 0) = s0.frame.at(i, j);  // complement column
    } else {
      for (int i = 0; i < n; ++i) beta.at(i, 0) = s0.coframe.at(j, i);  // leaf coframe row
    }
    Matrix<FourierScalar> fe = flat * (sp.eps_map * x);
    Matrix<FourierScalar> delta = -fe + sp.eps_map.transpose() * (fe - beta);
    Matrix<FourierScalar> c = x + s0.pi_sharp * beta;
    if (!(-(s0.pi_sharp * delta) - sp.eps_map * x).is_zero())
      throw SemanticError("eta graph part disagrees with eps");
    for (int i = 0; i < n; ++i) {
      cmat.at(i, j) = c.at(i, 0);
      dmat.at(i, j) = delta.at(i, 0);
    }
  }
  sp.eta = -dmat * matrix_inverse_fourier(cmat);
  if (!(sp.eta + sp.eta.transpose()).is_zero())
    throw SemanticError("eta coefficient matrix is not skew");

  // xi by the three splitting rules; omega(a, b) below is the leafwise form
  Matrix<FourierScalar> vpart = s0.pr_tf, epart = sp.eps_map;  // eps pr_g = eps
  auto omega = [&](const Matrix<FourierScalar>& a, int ca, const Matrix<FourierScalar>& b,
                   int cb) { return detail::dot(flat * a, ca, b, cb); };
  sp.xi_mat = Matrix<FourierScalar>(n, n, fz);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      FourierScalar val = -omega(vpart, i, epart, j);
      val += omega(vpart, j, epart, i);
      val += omega(epart, i, epart, j);
      sp.xi_mat.at(i, j) = val;
    }
  if (!(sp.xi_mat + sp.xi_mat.transpose()).is_zero())
    throw SemanticError("xi matrix is not skew");
  if (!(sp.eta - sp.xi_mat).is_zero())
    throw SemanticError("transported eta disagrees with xi");
  sp.xi = two_form_from_matrix(sp.xi_mat);
  return sp;
}

// Build the second splitting from a complement frame (n x (n - leaf) columns
// over the trig-polynomial ring); the leafwise block is shared with s0.
inline SplittingPair change_of_splitting(const TorusPoissonSetup& s0,
                                         const Matrix<FourierScalar>& g1) {
  if (g1.rows != s0.n || g1.cols != s0.n - s0.leaf)
    throw DimensionMismatch("complement frame shape");
  Matrix<FourierScalar> frame = s0.frame;
  for (int j = 0; j < g1.cols; ++j)
    for (int i = 0; i < s0.n; ++i) frame.at(i, s0.leaf + j) = g1.at(i, j);
  for (const auto& q : quarter_grid(s0.n)) {
    Matrix<FieldElement> m(s0.n, s0.n, FieldElement::zero());
    for (int i = 0; i < s0.n; ++i)
      for (int j = 0; j < s0.n; ++j) m.at(i, j) = frame.at(i, j).eval_quarter(q);
    if (matrix_rank(m) != s0.n)
      throw NotComplementary("complement meets the leaf distribution at a sample point");
  }
  return change_of_splitting(s0, make_setup(s0.n, s0.leaf, s0.pi, frame));
}

// (-1)^k sum_{a,b} xi_{ab} iota_{e^a} q1 ^ iota_{e^b} q2, bilinear over the
// degree parts of q1; first-slot contractions throughout.
inline FMultiVector kernel_pair_multivector(const Matrix<FourierScalar>& xi,
                                            const FMultiVector& q1, const FMultiVector& q2) {
  if (xi.rows != q1.n || xi.cols != q1.n) throw DimensionMismatch("kernel matrix size");
  FMultiVector::check(q1, q2);
  FMultiVector out(q1.n);
  for (int p = 0; p <= q1.top_degree(); ++p) {
    FMultiVector q1p = q1.degree_part(p);
    if (q1p.is_zero()) continue;
    int sign = p % 2 ? -1 : 1;
    for (int a = 1; a <= q1.n; ++a)
      for (int b = 1; b <= q1.n; ++b) {
        if (xi.at(a - 1, b - 1).is_zero()) continue;
        FMultiVector piece =
            wedge(zeta_derivative(q1p, a), zeta_derivative(q2, b)) * xi.at(a - 1, b - 1);
        out += sign > 0 ? piece : -piece;
      }
  }
  return out;
}

inline FMultiVector n2_apply(const SplittingPair& sp, const FMultiVector& q1,
                             const FMultiVector& q2) {
  return kernel_pair_multivector(sp.xi_mat, q1, q2);
}

// The coderivation with N2 as its only Taylor coefficient.
inline TaylorTable<TorusUniverse> n2_coderivation(const SplittingPair& sp) {
  TaylorTable<TorusUniverse> t;
  t.degree = 0;
  t.coeff[2] = [sp](const std::vector<FMultiVector>& args) {
    return n2_apply(sp, args[0], args[1]);
  };
  return t;
}

// tau e^N tau as a morphism table; conjugating by the global sign flip
// negates the even-arity Taylor coefficients of the exponential.
inline TaylorTable<TorusUniverse> splitting_morphism(const SplittingPair& sp, int bound = 4) {
  TorusUniverse u{sp.s0.n};
  TaylorTable<TorusUniverse> e = exp_coderivation(u, n2_coderivation(sp), bound);
  TaylorTable<TorusUniverse> out;
  out.degree = 0;
  for (const auto& [k, f] : e.coeff) {
    if (k % 2 == 0) {
      auto g = f;
      out.coeff[k] = [g](const std::vector<FMultiVector>& args) { return -g(args); };
    } else {
      out.coeff[k] = f;
    }
  }
  return out;
}

template <typename U>
TaylorTable<U> codifferential_table(const LInfty<U>& L) {
  TaylorTable<U> t;
  t.degree = 1;
  for (int k = 1; k <= L.kmax; ++k)
    if (L.m[k - 1]) t.coeff[k] = L.m[k - 1];
  return t;
}

// Codifferential table for the intertwining check.  tau e^N tau intertwines
// the Jacobi-normalized family itself; see the sign certification test.
inline TaylorTable<TorusUniverse> intertwined_codifferential(const TorusPoissonSetup& s) {
  return codifferential_table(foliation_instance(s));
}

// Residual of the intertwining relation for tau e^N tau between the bracket
// structures of the two complements, on one word of multivector fields.
inline WordSum<TorusUniverse> exp_N_and_intertwine(const SplittingPair& sp,
                                                   const std::vector<FMultiVector>& word,
                                                   int bound = 4) {
  TorusUniverse u{sp.s0.n};
  return intertwine_residual(u, splitting_morphism(sp, bound),
                             intertwined_codifferential(sp.s0),
                             intertwined_codifferential(sp.s1), word_of(u, word));
}

}  // namespace sflab
