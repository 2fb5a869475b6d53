#pragma once

#include "lbrackets.hpp"
#include "series.hpp"

namespace sflab {

// Deformations are truncated power series in eps with bivector coefficients.
using SeriesMultiVector = EpsSeries<FMultiVector>;

inline SeriesMultiVector series_zero_bivector(int n, int order) {
  return SeriesMultiVector(order, FMultiVector(n));
}

namespace detail {

inline void require_bivector_series(const SeriesMultiVector& z, const char* who) {
  for (int j = 0; j <= z.order; ++j)
    for (const auto& [t, v] : z[j].comp)
      if (!v.is_zero() && t.size() != 2)
        throw DegreeError(std::string(who) + " wants bivector coefficients");
}

}  // namespace detail

// Maurer-Cartan residual of the splitting-dependent structure, coefficient by
// coefficient:  l1(Z) + 1/2 l2(Z,Z) + 1/6 l3(Z,Z,Z)  truncated at the order
// of Z.  Every coefficient must be good for the splitting.
inline SeriesMultiVector mc_residual_G(const TorusPoissonSetup& s, const SeriesMultiVector& z) {
  detail::require_bivector_series(z, "mc residual");
  for (int j = 0; j <= z.order; ++j)
    if (auto w = good_witness(s, z[j]))
      throw NotGood("series coefficient at order " + std::to_string(j) +
                    " has a conormal pair");
  SplittingConnection conn = make_connection(s);
  auto b2 = [&](const FMultiVector& a, const FMultiVector& b) { return l2(s, a, b); };
  auto b3 = [&](const FMultiVector& a, const FMultiVector& b, const FMultiVector& c) {
    return l3(s, conn, a, b, c);
  };
  SeriesMultiVector out = z.map([&](const FMultiVector& a) { return l1(s, a); });
  SeriesMultiVector q2 = series_bilinear(b2, z, z);
  SeriesMultiVector q3 = series_trilinear(b3, z, z, z);
  FieldElement half = FieldElement::from_rat(rat(1, 2));
  FieldElement sixth = FieldElement::from_rat(rat(1, 6));
  for (int j = 0; j <= z.order; ++j) out[j] += q2[j] * half + q3[j] * sixth;
  return out;
}

// (Z^g)# = Z# (id + g Z#)^{-1} with an arbitrary flat matrix g; the Neumann
// series terminates because Z has no eps^0 term.  Negating g inverts the map.
inline SeriesMultiVector gauge_transform_core(const Matrix<FourierScalar>& gmat, int n,
                                              const SeriesMultiVector& z) {
  if (!z[0].is_zero()) throw NonSmallDeformation("deformation series has an eps^0 term");
  detail::require_bivector_series(z, "gauge transform");
  FourierScalar fz = FourierScalar::zero(n);
  auto mul = [](const Matrix<FourierScalar>& a, const Matrix<FourierScalar>& b) { return a * b; };
  EpsSeries<Matrix<FourierScalar>> sh =
      z.map([&](const FMultiVector& w) { return sharp_matrix(w, fz); });
  EpsSeries<Matrix<FourierScalar>> den = sh.map([&](const Matrix<FourierScalar>& m) {
    return gmat * m;
  });
  Matrix<FourierScalar> id = identity_matrix(n, fz, FourierScalar::constant(n, rat(1)));
  den[0] = den[0] + id;
  EpsSeries<Matrix<FourierScalar>> inv = series_geometric_inverse(den, id, mul);
  EpsSeries<Matrix<FourierScalar>> res = series_bilinear(mul, sh, inv);
  for (int j = 0; j <= res.order; ++j)
    if (!(res[j] + res[j].transpose()).is_zero())
      throw SemanticError("gauge transform lost skewness");
  return res.map([](const Matrix<FourierScalar>& m) { return bivector_from_matrix(m); });
}

inline SeriesMultiVector gauge_transform_series(const TorusPoissonSetup& s,
                                                const SeriesMultiVector& z) {
  return gauge_transform_core(s.gamma_mat, s.n, z);
}

// The Dirac exponential of a small deformation: Pi + Z^gamma.
inline SeriesMultiVector dirac_exp(const TorusPoissonSetup& s, const SeriesMultiVector& z) {
  SeriesMultiVector out = gauge_transform_series(s, z);
  out[0] += s.pi;
  return out;
}

// [P, P]_SN coefficient by coefficient; zero through the truncation order
// says the series is Poisson to that order.
inline SeriesMultiVector schouten_square_series(const SeriesMultiVector& p) {
  return series_bilinear(
      [](const FMultiVector& a, const FMultiVector& b) { return schouten(a, b); }, p, p);
}

namespace detail {

inline Matrix<FieldElement> eval_matrix(const Matrix<FourierScalar>& m,
                                        const std::vector<int>& q) {
  Matrix<FieldElement> out(m.rows, m.cols, FieldElement::zero());
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out.at(i, j) = m.at(i, j).eval_quarter(q);
  return out;
}

inline FMultiVector eval_series(const SeriesMultiVector& z, const Rational& eps) {
  FieldElement e = FieldElement::from_rat(eps);
  return series_eval(z, e, [](const FieldElement& c, const FMultiVector& m) { return m * c; });
}

}  // namespace detail

// Rank of the sharp map of an evaluated series at a quarter-grid sample.
inline int sharp_rank_at(const TorusPoissonSetup& s, const SeriesMultiVector& p,
                         const std::vector<int>& q, const Rational& eps) {
  FMultiVector val = detail::eval_series(p, eps);
  return matrix_rank(detail::eval_matrix(sharp_matrix(val, s.fzero()), q));
}

// The two column families whose spans the graph identity compares, evaluated
// exactly at a quarter-grid sample and a rational eps.  Contractions follow
// the first-slot rule, so iota_a B = -(sharp matrix) a componentwise.
struct GraphTransport {
  Matrix<FieldElement> graph_exp;    // columns of gr(Pi + Z^gamma)
  Matrix<FieldElement> transported;  // columns of R_Pi R_gamma gr(Z)
};

inline GraphTransport graph_transport_columns(const TorusPoissonSetup& s,
                                              const SeriesMultiVector& z,
                                              const std::vector<int>& q, const Rational& eps) {
  detail::require_bivector_series(z, "graph transport");
  int n = s.n;
  FMultiVector zval = detail::eval_series(z, eps);
  Matrix<FieldElement> mz = detail::eval_matrix(sharp_matrix(zval, s.fzero()), q);
  Matrix<FieldElement> g = detail::eval_matrix(s.gamma_mat, q);
  Matrix<FieldElement> mpi = detail::eval_matrix(s.pi_sharp, q);
  Matrix<FieldElement> id = identity_matrix(n, FieldElement::zero(), FieldElement::one());

  Matrix<FieldElement> t = id + g * mz;
  if (matrix_det(t).is_zero())
    throw SingularAtSample("id + gamma-flat Z-sharp is singular at the sample");

  // gr(Pi + Z^gamma): the gauge transform evaluated pointwise, no truncation
  Matrix<FieldElement> mzg = mz * matrix_inverse_field(t);
  GraphTransport out{vstack(-(mpi + mzg), id), Matrix<FieldElement>()};

  // R_gamma adds iota_X gamma to the form part, R_Pi adds iota_alpha Pi to
  // the vector part; on the graph columns X = -mz a this lands on
  //   vector  -mz a - mpi (id + g mz) a,   form  (id + g mz) a.
  Matrix<FieldElement> form = t;
  Matrix<FieldElement> vec = -mz - mpi * form;
  out.transported = vstack(vec, form);
  return out;
}

inline bool graph_transport_check(const TorusPoissonSetup& s, const SeriesMultiVector& z,
                                  const std::vector<int>& q, const Rational& eps) {
  GraphTransport gt = graph_transport_columns(s, z, q, eps);
  return same_column_space(gt.graph_exp, gt.transported);
}

}  // namespace sflab
