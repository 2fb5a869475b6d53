#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "graded.hpp"
#include "lbrackets.hpp"
#include "tpoly.hpp"

namespace sflab {

// A universe pins down the scalars and an ordered token basis for one
// L-infinity[1] instance, plus the translation between elements and token
// expansions.  All word-level machinery below is written against that
// expansion, so zero tests stay exact.

// Finite-dimensional graded vector space over Q, elements as sparse
// coordinate vectors.
struct ToyVec {
  std::map<int, Rational> c;

  bool is_zero() const { return c.empty(); }
  void add_term(int i, const Rational& v) {
    auto it = c.find(i);
    if (it == c.end()) {
      if (v != 0) c.emplace(i, v);
      return;
    }
    it->second += v;
    if (it->second == 0) c.erase(it);
  }
  ToyVec& operator+=(const ToyVec& o) {
    for (const auto& [i, v] : o.c) add_term(i, v);
    return *this;
  }
  friend ToyVec operator+(ToyVec a, const ToyVec& b) { return a += b; }
  ToyVec operator-() const {
    ToyVec out;
    for (const auto& [i, v] : c) out.c.emplace(i, -v);
    return out;
  }
  friend ToyVec operator-(const ToyVec& a, const ToyVec& b) { return a + (-b); }
  friend ToyVec operator*(const ToyVec& a, const Rational& r) {
    ToyVec out;
    if (r == 0) return out;
    for (const auto& [i, v] : a.c) out.c.emplace(i, v * r);
    return out;
  }
  friend bool operator==(const ToyVec& a, const ToyVec& b) { return a.c == b.c; }
  friend bool operator!=(const ToyVec& a, const ToyVec& b) { return !(a == b); }
};

inline ToyVec toy(int i, const Rational& v = Rational(1)) {
  ToyVec out;
  out.add_term(i, v);
  return out;
}

struct ToyUniverse {
  // degree per basis token, already in the shifted (bracket-degree +1) grading
  std::vector<int> token_degs;

  using Elem = ToyVec;
  using Scalar = Rational;
  using Token = int;

  int degree(Token t) const { return token_degs[t]; }
  Elem zero() const { return ToyVec{}; }
  Elem monomial(Token t, const Scalar& s) const { return toy(t, s); }
  Elem scale(const Elem& e, const Rational& r) const { return e * r; }
  std::vector<std::pair<Scalar, Token>> decompose(const Elem& e) const {
    std::vector<std::pair<Scalar, Token>> out;
    for (const auto& [i, v] : e.c) out.emplace_back(v, i);
    return out;
  }
  static bool scalar_zero(const Scalar& s) { return s == 0; }
  static Scalar scalar_one() { return Rational(1); }
};

// Multivector fields on the torus; tokens are (wedge tuple, Fourier mode).
struct TorusUniverse {
  int n = 0;
  int shift = 2;  // instance degree = multivector degree - shift

  using Elem = FMultiVector;
  using Scalar = FieldElement;
  using Token = std::pair<std::vector<int>, std::vector<long>>;

  int degree(const Token& t) const { return (int)t.first.size() - shift; }
  Elem zero() const { return FMultiVector(n); }
  Elem monomial(const Token& t, const Scalar& s) const {
    FMultiVector out(n);
    FourierScalar f(n);
    f.add_term(t.second, s);
    out.add_term(t.first, f);
    return out;
  }
  Elem scale(const Elem& e, const Rational& r) const { return e * FieldElement(r); }
  std::vector<std::pair<Scalar, Token>> decompose(const Elem& e) const {
    std::vector<std::pair<Scalar, Token>> out;
    for (const auto& [t, f] : e.comp)
      for (const auto& [k, v] : f.c) out.emplace_back(v, Token{t, k});
    return out;
  }
  static bool scalar_zero(const Scalar& s) { return s.is_zero(); }
  static Scalar scalar_one() { return FieldElement::one(); }
};

// An instance: multibracket evaluators m_1..m_kmax, each degree +1 and graded
// symmetric in the universe grading.  Brackets above kmax are identically
// zero; arities above the bound are refused rather than silently truncated.
template <typename U>
struct LInfty {
  U u;
  int kmax = 0;
  int arity_bound = 4;
  std::vector<std::function<typename U::Elem(const std::vector<typename U::Elem>&)>> m;

  typename U::Elem bracket(const std::vector<typename U::Elem>& args) const {
    int k = (int)args.size();
    if (k < 1 || k > arity_bound) throw ArityUnsupported("bracket arity out of range");
    if (k > kmax || !m[k - 1]) return u.zero();
    return m[k - 1](args);
  }
};

// sum_{i+j=n+1} sum_{(i,n-i)-unshuffles} eps(sigma) m_j(m_i(...), ...)
template <typename U>
typename U::Elem jacobi_residual(const LInfty<U>& L, int n,
                                 const std::vector<typename U::Elem>& v,
                                 const std::vector<int>& degs) {
  if ((int)v.size() != n || (int)degs.size() != n) throw LengthMismatch("jacobi input lengths");
  if (n < 1 || n > L.arity_bound) throw ArityUnsupported("jacobi arity out of range");
  typename U::Elem out = L.u.zero();
  for (int i = 1; i <= n; ++i) {
    int j = n + 1 - i;
    if (i > L.kmax || j > L.kmax) continue;
    for (const Perm& sg : unshuffles(i, n)) {
      int es = koszul_sign(sg, degs);
      std::vector<typename U::Elem> inner;
      for (int a = 0; a < i; ++a) inner.push_back(v[sg[a]]);
      std::vector<typename U::Elem> outer;
      outer.push_back(L.bracket(inner));
      for (int a = i; a < n; ++a) outer.push_back(v[sg[a]]);
      typename U::Elem t = L.bracket(outer);
      out += es > 0 ? t : -t;
    }
  }
  return out;
}

// sum_k 1/k! m_k(v,..,v) for a degree-0 element
template <typename U>
typename U::Elem mc_residual(const LInfty<U>& L, const typename U::Elem& v) {
  for (const auto& [s, t] : L.u.decompose(v))
    if (L.u.degree(t) != 0) throw DegreeError("maurer-cartan element must have degree 0");
  typename U::Elem out = L.u.zero();
  std::vector<typename U::Elem> args;
  for (int k = 1; k <= L.kmax; ++k) {
    args.push_back(v);
    out += L.u.scale(L.bracket(args), inv_factorial(k));
  }
  return out;
}

// One-parameter family: v_t degree 0, w_t degree -1, both polynomial in t.
template <typename U>
struct GaugePath {
  TPoly<typename U::Elem> v;
  TPoly<typename U::Elem> w;
};

namespace detail {
// multilinear expansion of a bracket over t-polynomial arguments
template <typename U>
TPoly<typename U::Elem> poly_bracket(const LInfty<U>& L,
                                     const std::vector<TPoly<typename U::Elem>>& args) {
  TPoly<typename U::Elem> out;
  std::vector<size_t> idx(args.size(), 0);
  for (const auto& a : args)
    if (a.is_zero()) return out;
  while (true) {
    int tdeg = 0;
    std::vector<typename U::Elem> at;
    for (size_t j = 0; j < args.size(); ++j) {
      at.push_back(args[j].a[idx[j]]);
      tdeg += (int)idx[j];
    }
    typename U::Elem val = L.bracket(at);
    if ((int)out.a.size() <= tdeg) out.a.resize(tdeg + 1, L.u.zero());
    out.a[tdeg] += val;
    size_t j = 0;
    while (j < args.size() && idx[j] + 1 == args[j].a.size()) idx[j++] = 0;
    if (j == args.size()) break;
    ++idx[j];
  }
  out.trim();
  return out;
}
}  // namespace detail

// d v_t/dt - sum_k 1/k! m_{k+1}(w_t, v_t, .., v_t), exactly as a t-polynomial
template <typename U>
TPoly<typename U::Elem> gauge_residual(const LInfty<U>& L, const GaugePath<U>& path,
                                       int t_bound = 4) {
  path.v.require_degree_at_most(t_bound);
  path.w.require_degree_at_most(t_bound);
  for (const auto& e : path.v.a)
    for (const auto& [s, t] : L.u.decompose(e))
      if (L.u.degree(t) != 0) throw DegreeError("gauge family v_t must have degree 0");
  for (const auto& e : path.w.a)
    for (const auto& [s, t] : L.u.decompose(e))
      if (L.u.degree(t) != -1) throw DegreeError("gauge generator w_t must have degree -1");
  TPoly<typename U::Elem> res = path.v.dt();
  for (int k = 0; k + 1 <= L.kmax; ++k) {
    std::vector<TPoly<typename U::Elem>> args{path.w};
    for (int a = 0; a < k; ++a) args.push_back(path.v);
    TPoly<typename U::Elem> term = detail::poly_bracket(L, args);
    Rational r = inv_factorial(k);
    for (auto& e : term.a) e = L.u.scale(e, r);
    res = res - term;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Words over a universe's token basis, kept canonical; the coalgebra side.

template <typename U>
struct WordSum {
  std::map<std::vector<typename U::Token>, typename U::Scalar> terms;
  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const WordSum& a, const WordSum& b) { return a.terms == b.terms; }
};

template <typename U>
void word_add(const U& u, WordSum<U>& dst, std::vector<typename U::Token> toks,
              typename U::Scalar s) {
  if (U::scalar_zero(s)) return;
  std::vector<int> degs;
  degs.reserve(toks.size());
  for (const auto& t : toks) degs.push_back(u.degree(t));
  SymWord<typename U::Token> w = canonical_word(std::move(toks), std::move(degs));
  for (size_t j = 0; j + 1 < w.toks.size(); ++j)
    if ((w.degs[j] & 1) && w.toks[j] == w.toks[j + 1]) return;  // odd square is zero
  if (w.sign < 0) s = -s;
  auto it = dst.terms.find(w.toks);
  if (it == dst.terms.end()) {
    dst.terms.emplace(std::move(w.toks), s);
    return;
  }
  it->second = it->second + s;
  if (U::scalar_zero(it->second)) dst.terms.erase(it);
}

// Expand a list of elements into the canonical word sum of their product.
template <typename U>
WordSum<U> word_of(const U& u, const std::vector<typename U::Elem>& els) {
  WordSum<U> out;
  std::vector<std::vector<std::pair<typename U::Scalar, typename U::Token>>> parts;
  for (const auto& e : els) {
    parts.push_back(u.decompose(e));
    if (parts.back().empty()) return out;
  }
  std::vector<size_t> idx(parts.size(), 0);
  while (true) {
    typename U::Scalar s = U::scalar_one();
    std::vector<typename U::Token> toks;
    for (size_t j = 0; j < parts.size(); ++j) {
      s = s * parts[j][idx[j]].first;
      toks.push_back(parts[j][idx[j]].second);
    }
    word_add(u, out, std::move(toks), s);
    size_t j = 0;
    while (j < parts.size() && idx[j] + 1 == parts[j].size()) idx[j++] = 0;
    if (j == parts.size()) break;
    ++idx[j];
  }
  return out;
}

// Arity-indexed Taylor coefficients of a coderivation or coalgebra morphism.
template <typename U>
struct TaylorTable {
  int degree = 0;  // 1 for codifferentials, 0 for morphisms
  std::map<int, std::function<typename U::Elem(const std::vector<typename U::Elem>&)>> coeff;
};

// Q(v_1 .. v_n) = sum_i sum_{(i,n-i)-unshuffles} eps Q_i(block) . rest
template <typename U>
WordSum<U> coderivation_apply(const U& u, const TaylorTable<U>& D, const WordSum<U>& ws) {
  WordSum<U> out;
  for (const auto& [toks, c] : ws.terms) {
    int n = (int)toks.size();
    std::vector<int> degs;
    for (const auto& t : toks) degs.push_back(u.degree(t));
    for (const auto& [i, Di] : D.coeff) {
      if (i < 1 || i > n) continue;
      for (const Perm& sg : unshuffles(i, n)) {
        int es = koszul_sign(sg, degs);
        std::vector<typename U::Elem> block;
        for (int a = 0; a < i; ++a) block.push_back(u.monomial(toks[sg[a]], U::scalar_one()));
        typename U::Elem val = Di(block);
        for (const auto& [s2, t2] : u.decompose(val)) {
          std::vector<typename U::Token> nw{t2};
          for (int a = i; a < n; ++a) nw.push_back(toks[sg[a]]);
          typename U::Scalar cc = c * s2;
          word_add(u, out, std::move(nw), es > 0 ? cc : -cc);
        }
      }
    }
  }
  return out;
}

// Phi(v_1 .. v_n) = sum over block counts/sizes/permutations with coefficient
// eps(sigma) / (i! p_1! .. p_i!), each block fed to its Taylor coefficient.
template <typename U>
WordSum<U> morphism_apply(const U& u, const TaylorTable<U>& Phi, const WordSum<U>& ws) {
  WordSum<U> out;
  for (const auto& [toks, c] : ws.terms) {
    int n = (int)toks.size();
    if (n == 0) {
      word_add(u, out, {}, c);
      continue;
    }
    std::vector<int> degs;
    for (const auto& t : toks) degs.push_back(u.degree(t));
    for (int i = 1; i <= n; ++i) {
      for (const auto& comp : compositions(n, i)) {
        bool have = true;
        Rational denom = factorial(i);
        for (int p : comp) {
          if (!Phi.coeff.count(p)) have = false;
          denom *= factorial(p);
        }
        if (!have) continue;
        Rational weight = Rational(1) / denom;
        for (const Perm& sg : all_permutations(n)) {
          int es = koszul_sign(sg, degs);
          // evaluate the i blocks
          std::vector<std::vector<std::pair<typename U::Scalar, typename U::Token>>> parts;
          int pos = 0;
          bool dead = false;
          for (int b = 0; b < i && !dead; ++b) {
            std::vector<typename U::Elem> block;
            for (int a = 0; a < comp[b]; ++a)
              block.push_back(u.monomial(toks[sg[pos + a]], U::scalar_one()));
            pos += comp[b];
            parts.push_back(u.decompose(Phi.coeff.at(comp[b])(block)));
            if (parts.back().empty()) dead = true;
          }
          if (dead) continue;
          std::vector<size_t> idx(parts.size(), 0);
          while (true) {
            typename U::Scalar s = U::scalar_one() * (es > 0 ? weight : -weight);
            std::vector<typename U::Token> nw;
            for (size_t b = 0; b < parts.size(); ++b) {
              s = s * parts[b][idx[b]].first;
              nw.push_back(parts[b][idx[b]].second);
            }
            word_add(u, out, std::move(nw), c * s);
            size_t b = 0;
            while (b < parts.size() && idx[b] + 1 == parts[b].size()) idx[b++] = 0;
            if (b == parts.size()) break;
            ++idx[b];
          }
        }
      }
    }
  }
  return out;
}

// e^D on a word sum; exact because D is pronilpotent on bounded words.
template <typename U>
WordSum<U> exp_coderivation_apply(const U& u, const TaylorTable<U>& D, const WordSum<U>& w,
                                  int maxit = 64) {
  WordSum<U> out = w, term = w;
  for (int k = 1; k <= maxit; ++k) {
    term = coderivation_apply(u, D, term);
    for (auto& [tk, s] : term.terms) s = s * rat(1, k);
    if (term.is_zero()) return out;
    for (const auto& [tk, s] : term.terms) word_add(u, out, tk, s);
  }
  throw NotPronilpotent("coderivation exponential did not terminate");
}

// Taylor coefficients of e^D: corestriction of the exponential to cogenerators.
template <typename U>
TaylorTable<U> exp_coderivation(const U& u, const TaylorTable<U>& D, int length_bound = 4) {
  TaylorTable<U> out;
  out.degree = 0;
  for (int arity = 1; arity <= length_bound; ++arity) {
    out.coeff[arity] = [u, D](const std::vector<typename U::Elem>& args) {
      WordSum<U> e = exp_coderivation_apply(u, D, word_of(u, args));
      typename U::Elem v = u.zero();
      for (const auto& [tk, s] : e.terms)
        if (tk.size() == 1) v += u.monomial(tk[0], s);
      return v;
    };
  }
  return out;
}

// (R o Phi - Phi o Q) applied to a word; zero on all words up to the length
// bound certifies that Phi intertwines the two codifferentials there.
template <typename U>
WordSum<U> intertwine_residual(const U& u, const TaylorTable<U>& Phi, const TaylorTable<U>& Q,
                               const TaylorTable<U>& R, const WordSum<U>& w) {
  WordSum<U> out = coderivation_apply(u, R, morphism_apply(u, Phi, w));
  WordSum<U> rhs = morphism_apply(u, Phi, coderivation_apply(u, Q, w));
  for (const auto& [tk, s] : rhs.terms) word_add(u, out, tk, -s);
  return out;
}

// Full graded coproduct including the empty-word ends; oracle for the
// co-Leibniz and comorphism laws.
template <typename U>
struct TensorSum {
  std::map<std::pair<std::vector<typename U::Token>, std::vector<typename U::Token>>,
           typename U::Scalar>
      terms;
  bool is_zero() const { return terms.empty(); }
  friend bool operator==(const TensorSum& a, const TensorSum& b) { return a.terms == b.terms; }
};

template <typename U>
void tensor_add(const U& u, TensorSum<U>& dst, std::vector<typename U::Token> l,
                std::vector<typename U::Token> r, typename U::Scalar s) {
  if (U::scalar_zero(s)) return;
  WordSum<U> lw, rw;
  word_add(u, lw, std::move(l), U::scalar_one());
  word_add(u, rw, std::move(r), U::scalar_one());
  if (lw.terms.empty() || rw.terms.empty()) return;
  const auto& [lt, ls] = *lw.terms.begin();
  const auto& [rt, rs] = *rw.terms.begin();
  typename U::Scalar v = s * ls * rs;
  auto key = std::make_pair(lt, rt);
  auto it = dst.terms.find(key);
  if (it == dst.terms.end()) {
    dst.terms.emplace(std::move(key), v);
    return;
  }
  it->second = it->second + v;
  if (U::scalar_zero(it->second)) dst.terms.erase(it);
}

template <typename U>
TensorSum<U> coproduct(const U& u, const WordSum<U>& ws) {
  TensorSum<U> out;
  for (const auto& [toks, c] : ws.terms) {
    int n = (int)toks.size();
    std::vector<int> degs;
    for (const auto& t : toks) degs.push_back(u.degree(t));
    for (int i = 0; i <= n; ++i)
      for (const Perm& sg : unshuffles(i, n)) {
        int es = koszul_sign(sg, degs);
        std::vector<typename U::Token> l, r;
        for (int a = 0; a < i; ++a) l.push_back(toks[sg[a]]);
        for (int a = i; a < n; ++a) r.push_back(toks[sg[a]]);
        tensor_add(u, out, std::move(l), std::move(r), es > 0 ? c : -c);
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shipped instances.

inline LInfty<ToyUniverse> abelian_instance(std::vector<int> token_degs) {
  LInfty<ToyUniverse> L;
  L.u.token_degs = std::move(token_degs);
  L.kmax = 0;
  return L;
}

namespace detail {
// bilinear extension of a basis-pair bracket over ToyVec
inline ToyVec toy_bilinear(const std::function<ToyVec(int, int)>& bb, const ToyVec& x,
                           const ToyVec& y) {
  ToyVec out;
  for (const auto& [i, a] : x.c)
    for (const auto& [j, b] : y.c) out += bb(i, j) * (a * b);
  return out;
}
}  // namespace detail

// gl(1|1) with differential [E12,-]: a matrix dgLa whose decalage exercises a
// nonzero m_1 alongside m_2.  Tokens 0:E11 1:E22 2:E12 3:E21; dgLa degrees
// (0,0,1,-1), so token (shifted) degrees are one lower.
inline LInfty<ToyUniverse> matrix_dgla_instance() {
  LInfty<ToyUniverse> L;
  L.u.token_degs = {-1, -1, 0, -2};
  L.kmax = 2;
  L.m.resize(2);
  auto lie = [](int i, int j) -> ToyVec {
    // super commutators of the elementary 2x2 matrices
    auto key = [](int a, int b) { return a * 4 + b; };
    switch (key(i, j)) {
      case 0 * 4 + 2: return toy(2);        // [E11,E12] = E12
      case 2 * 4 + 0: return toy(2, -1);
      case 0 * 4 + 3: return toy(3, -1);    // [E11,E21] = -E21
      case 3 * 4 + 0: return toy(3);
      case 1 * 4 + 2: return toy(2, -1);    // [E22,E12] = -E12
      case 2 * 4 + 1: return toy(2);
      case 1 * 4 + 3: return toy(3);        // [E22,E21] = E21
      case 3 * 4 + 1: return toy(3, -1);
      case 2 * 4 + 3: return toy(0) + toy(1);  // [E12,E21] = E11+E22 (odd-odd)
      case 3 * 4 + 2: return toy(0) + toy(1);
      default: return ToyVec{};
    }
  };
  std::vector<int> g = {0, 0, 1, -1};  // dgLa degrees
  L.m[0] = [lie](const std::vector<ToyVec>& a) {
    return detail::toy_bilinear(lie, toy(2), a[0]);  // d = [E12, -]
  };
  L.m[1] = [lie, g](const std::vector<ToyVec>& a) {
    ToyVec out;
    for (const auto& [i, ci] : a[0].c) {
      ToyVec rest = detail::toy_bilinear(lie, toy(i, ci), a[1]);
      int dec = decalage_sign(2, {g[i], 0});
      out += dec > 0 ? rest : -rest;
    }
    return out;
  };
  return L;
}

// sl2 over Q in degree 0, shifted: the classical Jacobi identity in L[1] form.
// corrupt flips one structure constant ([h,e] becomes -2e) to give a structure
// that must fail the arity-3 identity.
inline LInfty<ToyUniverse> sl2_instance(bool corrupt = false) {
  LInfty<ToyUniverse> L;
  L.u.token_degs = {-1, -1, -1};  // e, h, f
  L.kmax = 2;
  L.m.resize(2);
  auto lie = [corrupt](int i, int j) -> ToyVec {
    auto key = [](int a, int b) { return a * 3 + b; };
    Rational he = corrupt ? -2 : 2;
    switch (key(i, j)) {
      case 1 * 3 + 0: return toy(0, he);   // [h,e] = 2e
      case 0 * 3 + 1: return toy(0, -he);
      case 1 * 3 + 2: return toy(2, -2);   // [h,f] = -2f
      case 2 * 3 + 1: return toy(2, 2);
      case 0 * 3 + 2: return toy(1);       // [e,f] = h
      case 2 * 3 + 0: return toy(1, -1);
      default: return ToyVec{};
    }
  };
  L.m[0] = nullptr;
  L.m[1] = [lie](const std::vector<ToyVec>& a) {
    // decalage of a degree-0 Lie algebra: m2 = -[.,.]
    return -detail::toy_bilinear(lie, a[0], a[1]);
  };
  return L;
}

// The foliation structure: closed-form brackets certified against the derived
// ones of the twisted generator.
inline LInfty<TorusUniverse> foliation_instance(const TorusPoissonSetup& s) {
  LInfty<TorusUniverse> L;
  L.u.n = s.n;
  L.kmax = 3;
  L.m.resize(3);
  SplittingConnection conn = make_connection(s);
  L.m[0] = [s](const std::vector<FMultiVector>& a) { return l1(s, a[0]); };
  L.m[1] = [s](const std::vector<FMultiVector>& a) { return l2(s, a[0], a[1]); };
  L.m[2] = [s, conn](const std::vector<FMultiVector>& a) { return l3(s, conn, a[0], a[1], a[2]); };
  return L;
}

// Decalage transport of the Koszul dgLa (d_Pi, [.,.]_SN) on multivector
// fields; graded by multivector degree minus one, shifted once more.
inline LInfty<TorusUniverse> koszul_instance(const TorusPoissonSetup& s) {
  LInfty<TorusUniverse> L;
  L.u.n = s.n;
  L.kmax = 2;
  L.m.resize(2);
  L.m[0] = [s](const std::vector<FMultiVector>& a) { return schouten(s.pi, a[0]); };
  L.m[1] = [s](const std::vector<FMultiVector>& a) {
    FMultiVector out(s.n);
    for (int p = 0; p <= a[0].top_degree(); ++p) {
      FMultiVector part = a[0].degree_part(p);
      if (part.is_zero()) continue;
      FMultiVector br = schouten(part, a[1]);
      out += decalage_sign(2, {p - 1, 0}) > 0 ? br : -br;
    }
    return out;
  };
  return L;
}

}  // namespace sflab
