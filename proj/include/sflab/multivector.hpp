#pragma once

#include <map>
#include <vector>

#include "graded.hpp"
#include "matrix.hpp"

namespace sflab {

namespace detail {

// Merge two strictly increasing index tuples; returns false on a repeated
// index (odd square), otherwise fills `out` and the interleaving parity.
inline bool merge_tuples(const std::vector<int>& a, const std::vector<int>& b,
                         std::vector<int>& out, int& parity) {
  out.clear();
  parity = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j]) {
      out.push_back(a[i++]);
    } else {
      parity += (int)(a.size() - i);  // b[j] hops over the rest of a
      out.push_back(b[j++]);
    }
  }
  while (i < a.size()) out.push_back(a[i++]);
  while (j < b.size()) out.push_back(b[j++]);
  return true;
}

}  // namespace detail

// Multivector field on the n-torus: sum over strictly increasing tuples
// I = (i1 < ... < ik), 1-based, of  P^I zeta_{i1}...zeta_{ik}  with scalar
// coefficients.  The empty tuple holds the function part.
template <typename S>
struct MultiVector {
  int n = 0;
  std::map<std::vector<int>, S> comp;

  MultiVector() = default;
  explicit MultiVector(int dirs) : n(dirs) {}

  static MultiVector zero(int n) { return MultiVector(n); }
  static MultiVector from_scalar(int n, const S& f) {
    MultiVector out(n);
    if (!f.is_zero()) out.comp[{}] = f;
    return out;
  }
  static MultiVector monomial(int n, const std::vector<int>& idx, const S& f) {
    for (size_t j = 0; j + 1 < idx.size(); ++j)
      if (idx[j] >= idx[j + 1]) throw DegreeError("indices must increase");
    for (int i : idx)
      if (i < 1 || i > n) throw AxisOutOfRange("multivector index");
    MultiVector out(n);
    if (!f.is_zero()) out.comp[idx] = f;
    return out;
  }

  bool is_zero() const { return comp.empty(); }
  // -1 if inhomogeneous
  int degree() const {
    int d = -1;
    for (const auto& [k, v] : comp) {
      if (d == -1)
        d = (int)k.size();
      else if (d != (int)k.size())
        return -1;
    }
    return d;
  }
  int top_degree() const {
    int d = 0;
    for (const auto& [k, v] : comp) d = std::max(d, (int)k.size());
    return d;
  }
  MultiVector degree_part(int k) const {
    MultiVector out(n);
    for (const auto& [t, v] : comp)
      if ((int)t.size() == k) out.comp.emplace(t, v);
    return out;
  }

  void add_term(const std::vector<int>& k, const S& v) {
    if (v.is_zero()) return;
    auto it = comp.find(k);
    if (it == comp.end()) {
      comp.emplace(k, v);
      return;
    }
    it->second = it->second + v;
    if (it->second.is_zero()) comp.erase(it);
  }

  static void check(const MultiVector& x, const MultiVector& y) {
    if (x.n != y.n) throw DimensionMismatch("multivector ambient size");
  }

  MultiVector& operator+=(const MultiVector& g) {
    check(*this, g);
    for (const auto& [k, v] : g.comp) add_term(k, v);
    return *this;
  }
  friend MultiVector operator+(MultiVector f, const MultiVector& g) { return f += g; }
  MultiVector operator-() const {
    MultiVector out(n);
    for (const auto& [k, v] : comp) out.comp.emplace(k, -v);
    return out;
  }
  friend MultiVector operator-(const MultiVector& f, const MultiVector& g) { return f + (-g); }
  template <typename C>
  friend MultiVector operator*(const MultiVector& f, const C& s) {
    MultiVector out(f.n);
    for (const auto& [k, v] : f.comp) out.add_term(k, v * s);
    return out;
  }
  friend bool operator==(const MultiVector& f, const MultiVector& g) {
    return f.n == g.n && f.comp == g.comp;
  }
  friend bool operator!=(const MultiVector& f, const MultiVector& g) { return !(f == g); }
};

template <typename S>
MultiVector<S> wedge(const MultiVector<S>& x, const MultiVector<S>& y) {
  MultiVector<S>::check(x, y);
  MultiVector<S> out(x.n);
  std::vector<int> merged;
  int parity;
  for (const auto& [a, va] : x.comp)
    for (const auto& [b, vb] : y.comp) {
      if (!detail::merge_tuples(a, b, merged, parity)) continue;
      S v = va * vb;
      out.add_term(merged, parity % 2 ? -v : v);
    }
  return out;
}

// Left derivative by zeta_i: removes index i, sign (-1)^{position}.
template <typename S>
MultiVector<S> zeta_derivative(const MultiVector<S>& x, int i) {
  MultiVector<S> out(x.n);
  for (const auto& [t, v] : x.comp)
    for (size_t pos = 0; pos < t.size(); ++pos)
      if (t[pos] == i) {
        std::vector<int> nt(t);
        nt.erase(nt.begin() + pos);
        out.add_term(nt, pos % 2 ? -v : v);
        break;
      }
  return out;
}

// Componentwise base derivative along x_i (the scalar type's axis i).
template <typename S>
MultiVector<S> base_derivative(const MultiVector<S>& x, int i) {
  MultiVector<S> out(x.n);
  for (const auto& [t, v] : x.comp) out.add_term(t, v.partial(i));
  return out;
}

namespace detail {

// One-sided composition sum_i d_{zeta_i} A ^ d_{x_i} B on homogeneous parts.
template <typename S>
MultiVector<S> sn_compose(const MultiVector<S>& a, const MultiVector<S>& b) {
  MultiVector<S> out(a.n);
  for (int i = 1; i <= a.n; ++i)
    out += wedge(zeta_derivative(a, i), base_derivative(b, i));
  return out;
}

}  // namespace detail

// Schouten bracket, extended bilinearly over inhomogeneous arguments:
//   [A,B] = -(-1)^a (A o B + (-1)^{ab} B o A)   on degrees a, b,
// normalized so that [X,Y] is the Lie bracket, [X,f] = X(f) = -[f,X].
template <typename S>
MultiVector<S> schouten(const MultiVector<S>& x, const MultiVector<S>& y) {
  MultiVector<S>::check(x, y);
  MultiVector<S> out(x.n);
  for (int a = 0; a <= x.top_degree(); ++a) {
    MultiVector<S> xa = x.degree_part(a);
    if (xa.is_zero()) continue;
    for (int b = 0; b <= y.top_degree(); ++b) {
      MultiVector<S> yb = y.degree_part(b);
      if (yb.is_zero()) continue;
      MultiVector<S> t = detail::sn_compose(xa, yb);
      MultiVector<S> u = detail::sn_compose(yb, xa);
      MultiVector<S> raw = (a * b) % 2 ? t - u : t + u;
      out += a % 2 ? raw : -raw;
    }
  }
  return out;
}

// Covariant mirror image: differential form with increasing tuples of
// theta-indices; shares the wedge/derivative sign machinery.
template <typename S>
struct Form {
  int n = 0;
  std::map<std::vector<int>, S> comp;

  Form() = default;
  explicit Form(int dirs) : n(dirs) {}
  static Form zero(int n) { return Form(n); }
  static Form monomial(int n, const std::vector<int>& idx, const S& f) {
    for (size_t j = 0; j + 1 < idx.size(); ++j)
      if (idx[j] >= idx[j + 1]) throw DegreeError("indices must increase");
    for (int i : idx)
      if (i < 1 || i > n) throw AxisOutOfRange("form index");
    Form out(n);
    if (!f.is_zero()) out.comp[idx] = f;
    return out;
  }

  bool is_zero() const { return comp.empty(); }
  int degree() const {
    int d = -1;
    for (const auto& [k, v] : comp) {
      if (d == -1)
        d = (int)k.size();
      else if (d != (int)k.size())
        return -1;
    }
    return d;
  }
  int top_degree() const {
    int d = 0;
    for (const auto& [k, v] : comp) d = std::max(d, (int)k.size());
    return d;
  }
  Form degree_part(int k) const {
    Form out(n);
    for (const auto& [t, v] : comp)
      if ((int)t.size() == k) out.comp.emplace(t, v);
    return out;
  }

  void add_term(const std::vector<int>& k, const S& v) {
    if (v.is_zero()) return;
    auto it = comp.find(k);
    if (it == comp.end()) {
      comp.emplace(k, v);
      return;
    }
    it->second = it->second + v;
    if (it->second.is_zero()) comp.erase(it);
  }

  static void check(const Form& x, const Form& y) {
    if (x.n != y.n) throw DimensionMismatch("form ambient size");
  }
  Form& operator+=(const Form& g) {
    check(*this, g);
    for (const auto& [k, v] : g.comp) add_term(k, v);
    return *this;
  }
  friend Form operator+(Form f, const Form& g) { return f += g; }
  Form operator-() const {
    Form out(n);
    for (const auto& [k, v] : comp) out.comp.emplace(k, -v);
    return out;
  }
  friend Form operator-(const Form& f, const Form& g) { return f + (-g); }
  template <typename C>
  friend Form operator*(const Form& f, const C& s) {
    Form out(f.n);
    for (const auto& [k, v] : f.comp) out.add_term(k, v * s);
    return out;
  }
  friend bool operator==(const Form& f, const Form& g) { return f.n == g.n && f.comp == g.comp; }
  friend bool operator!=(const Form& f, const Form& g) { return !(f == g); }
};

template <typename S>
Form<S> wedge(const Form<S>& x, const Form<S>& y) {
  Form<S>::check(x, y);
  Form<S> out(x.n);
  std::vector<int> merged;
  int parity;
  for (const auto& [a, va] : x.comp)
    for (const auto& [b, vb] : y.comp) {
      if (!detail::merge_tuples(a, b, merged, parity)) continue;
      S v = va * vb;
      out.add_term(merged, parity % 2 ? -v : v);
    }
  return out;
}

// Left derivative by theta_i on forms.
template <typename S>
Form<S> theta_derivative(const Form<S>& x, int i) {
  Form<S> out(x.n);
  for (const auto& [t, v] : x.comp)
    for (size_t pos = 0; pos < t.size(); ++pos)
      if (t[pos] == i) {
        std::vector<int> nt(t);
        nt.erase(nt.begin() + pos);
        out.add_term(nt, pos % 2 ? -v : v);
        break;
      }
  return out;
}

// Interior product with a vector field X = sum X^i e_i (degree-1 multivector).
template <typename S>
Form<S> interior(const MultiVector<S>& x, const Form<S>& w) {
  if (x.n != w.n) throw DimensionMismatch("interior product ambient size");
  if (x.top_degree() > 1) throw DegreeError("interior product wants a vector field");
  Form<S> out(w.n);
  for (int i = 1; i <= w.n; ++i) {
    auto it = x.comp.find({i});
    if (it == x.comp.end()) continue;
    out += theta_derivative(w, i) * it->second;
  }
  return out;
}

// de Rham differential: d(f theta_I) = sum_i (df/dx_i) theta_i ^ theta_I.
template <typename S>
Form<S> de_rham(const Form<S>& w) {
  Form<S> out(w.n);
  std::vector<int> merged;
  int parity;
  for (const auto& [t, v] : w.comp)
    for (int i = 1; i <= w.n; ++i) {
      S dv = v.partial(i);
      if (dv.is_zero()) continue;
      std::vector<int> one{i};
      if (!detail::merge_tuples(one, t, merged, parity)) continue;
      out.add_term(merged, parity % 2 ? -dv : dv);
    }
  return out;
}

// Full pairing of a form and a multivector of the same degree (plus lower
// terms ignored): <theta_I, zeta_I> = 1 on matching increasing tuples.
template <typename S>
S pairing(const Form<S>& w, const MultiVector<S>& p, const S& zero) {
  if (w.n != p.n) throw DimensionMismatch("pairing ambient size");
  S out = zero;
  for (const auto& [t, v] : w.comp) {
    auto it = p.comp.find(t);
    if (it != p.comp.end()) out = out + v * it->second;
  }
  return out;
}

// Evaluate a k-form on k vector fields via the permutation sum; the oracle
// route used against the contraction-based implementations.
template <typename S>
S eval_form(const Form<S>& w, const std::vector<MultiVector<S>>& xs, const S& zero) {
  S out = zero;
  for (const auto& [t, v] : w.comp) {
    if (t.size() != xs.size()) continue;
    for (const Perm& s : all_permutations((int)t.size())) {
      S prod = v;
      for (size_t j = 0; j < t.size(); ++j) {
        auto it = xs[s[j]].comp.find({t[j]});
        if (it == xs[s[j]].comp.end()) {
          prod = zero;
          break;
        }
        prod = prod * it->second;
      }
      int sg = permutation_sign(s);
      out = sg > 0 ? out + prod : out - prod;
    }
  }
  return out;
}

// zeta_i -> sum_j M(i,j) zeta'_j, extended multiplicatively; the odd-variable
// substitution behind frame changes.
template <typename S>
MultiVector<S> substitute(const MultiVector<S>& p, const Matrix<S>& m) {
  if (m.rows != p.n || m.cols != p.n) throw DimensionMismatch("substitution matrix size");
  MultiVector<S> out(p.n);
  for (const auto& [t, v] : p.comp) {
    MultiVector<S> acc = MultiVector<S>::from_scalar(p.n, v);
    for (int idx : t) {
      MultiVector<S> lin(p.n);
      for (int j = 1; j <= p.n; ++j) lin.add_term({j}, m.at(idx - 1, j - 1));
      acc = wedge(acc, lin);
    }
    out += acc;
  }
  return out;
}

template <typename S>
Form<S> substitute(const Form<S>& w, const Matrix<S>& m) {
  if (m.rows != w.n || m.cols != w.n) throw DimensionMismatch("substitution matrix size");
  Form<S> out(w.n);
  for (const auto& [t, v] : w.comp) {
    Form<S> acc(w.n);
    acc.add_term({}, v);
    for (int idx : t) {
      Form<S> lin(w.n);
      for (int j = 1; j <= w.n; ++j) lin.add_term({j}, m.at(idx - 1, j - 1));
      acc = wedge(acc, lin);
    }
    out += acc;
  }
  return out;
}

// Bivector P = sum_{i<j} P^{ij} zeta_i zeta_j  <->  skew matrix with
// entries M(i,j) = P^{ij}; P# alpha = M alpha.
template <typename S>
Matrix<S> sharp_matrix(const MultiVector<S>& p, const S& zero) {
  Matrix<S> m(p.n, p.n, zero);
  for (const auto& [t, v] : p.comp) {
    if (t.size() != 2) throw DegreeError("sharp matrix wants a bivector");
    m.at(t[0] - 1, t[1] - 1) = v;
    m.at(t[1] - 1, t[0] - 1) = -v;
  }
  return m;
}

template <typename S>
MultiVector<S> bivector_from_matrix(const Matrix<S>& m) {
  if (m.rows != m.cols) throw DimensionMismatch("bivector matrix must be square");
  MultiVector<S> out(m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = i + 1; j < m.cols; ++j) out.add_term({i + 1, j + 1}, m.at(i, j));
  return out;
}

// Two-form  g = sum_{i<j} g_{ij} theta_i theta_j  <->  skew matrix;
// g-flat X = matrix * X.
template <typename S>
Matrix<S> flat_matrix(const Form<S>& g, const S& zero) {
  Matrix<S> m(g.n, g.n, zero);
  for (const auto& [t, v] : g.comp) {
    if (t.size() != 2) throw DegreeError("flat matrix wants a two-form");
    m.at(t[0] - 1, t[1] - 1) = v;
    m.at(t[1] - 1, t[0] - 1) = -v;
  }
  return m;
}

template <typename S>
Form<S> two_form_from_matrix(const Matrix<S>& m) {
  if (m.rows != m.cols) throw DimensionMismatch("two-form matrix must be square");
  Form<S> out(m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = i + 1; j < m.cols; ++j) out.add_term({i + 1, j + 1}, m.at(i, j));
  return out;
}

}  // namespace sflab
