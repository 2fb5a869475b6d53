#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "field.hpp"

namespace sflab {

// Permutations are written as images: perm[j] = original position (0-based)
// of the entry that lands at slot j.  Degree vectors run parallel to the
// original, unpermuted list.

using Perm = std::vector<int>;

// Koszul sign via inversion pairs: each pair placed out of order contributes
// (-1)^{d_a d_b}.
inline int koszul_sign(const Perm& perm, const std::vector<int>& degs) {
  if (perm.size() != degs.size()) throw LengthMismatch("koszul sign arity");
  int odd = 0;
  for (size_t j = 0; j < perm.size(); ++j)
    for (size_t k = j + 1; k < perm.size(); ++k)
      if (perm[j] > perm[k] && (degs[perm[j]] & 1) && (degs[perm[k]] & 1)) ++odd;
  return odd % 2 == 0 ? 1 : -1;
}

// Same sign by sorting with adjacent transpositions; independent of the
// inversion-pair route and used to cross-check it.
inline int koszul_sign_bubble(Perm perm, const std::vector<int>& degs) {
  if (perm.size() != degs.size()) throw LengthMismatch("koszul sign arity");
  int sign = 1;
  bool moved = true;
  while (moved) {
    moved = false;
    for (size_t j = 0; j + 1 < perm.size(); ++j)
      if (perm[j] > perm[j + 1]) {
        if ((degs[perm[j]] & 1) && (degs[perm[j + 1]] & 1)) sign = -sign;
        std::swap(perm[j], perm[j + 1]);
        moved = true;
      }
  }
  return sign;
}

// All (i, n-i)-unshuffles: increasing on the first i slots and on the rest.
inline std::vector<Perm> unshuffles(int i, int n) {
  if (i < 0 || i > n) throw BadArity("unshuffle block size");
  std::vector<Perm> out;
  std::vector<int> pick(i);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    Perm p(pick.begin(), pick.end());
    std::vector<bool> used(n, false);
    for (int x : pick) used[x] = true;
    for (int x = 0; x < n; ++x)
      if (!used[x]) p.push_back(x);
    out.push_back(std::move(p));
    // next combination
    int j = i - 1;
    while (j >= 0 && pick[j] == n - i + j) --j;
    if (j < 0) break;
    ++pick[j];
    for (int k = j + 1; k < i; ++k) pick[k] = pick[k - 1] + 1;
  }
  return out;
}

inline std::vector<Perm> all_permutations(int n) {
  std::vector<Perm> out;
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Ordered compositions of n into exactly `parts` positive pieces.
inline std::vector<std::vector<int>> compositions(int n, int parts) {
  std::vector<std::vector<int>> out;
  if (parts <= 0 || n < parts) return out;
  std::vector<int> cur(parts, 1);
  cur[0] = n - parts + 1;
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == parts - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 1; v <= left - (parts - 1 - pos); ++v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, n);
  return out;
}

// A graded symmetric word: entries stably sorted by (degree, entry order)
// with the Koszul sign picked up from odd-odd adjacent swaps.  The sort only
// moves strictly out-of-order neighbours, so canonicalizing a canonical word
// is the identity with sign +1.
template <typename Tok>
struct SymWord {
  std::vector<Tok> toks;
  std::vector<int> degs;
  int sign = 1;
};

template <typename Tok>
inline SymWord<Tok> canonical_word(std::vector<Tok> toks, std::vector<int> degs) {
  if (toks.size() != degs.size()) throw LengthMismatch("word degree annotation");
  int sign = 1;
  bool moved = true;
  while (moved) {
    moved = false;
    for (size_t j = 0; j + 1 < toks.size(); ++j) {
      if (degs[j] < degs[j + 1] || (degs[j] == degs[j + 1] && !(toks[j + 1] < toks[j])))
        continue;
      if ((degs[j] & 1) && (degs[j + 1] & 1)) sign = -sign;
      std::swap(toks[j], toks[j + 1]);
      std::swap(degs[j], degs[j + 1]);
      moved = true;
    }
  }
  return SymWord<Tok>{std::move(toks), std::move(degs), sign};
}

// Sign relating the two bracket conventions on a graded space V and its
// shift: l_k(v_1..v_k) = decalage_sign(k, degs) * m_k(v_1[1]..v_k[1]) where
// degs are the V-side degrees.
inline int decalage_sign(int k, const std::vector<int>& degs) {
  if ((int)degs.size() != k) throw LengthMismatch("decalage arity");
  long e = k;  // the global -(-1)^k as parity k, overall minus folded below
  for (int i = 1; i <= k; ++i) e += (long)(k - i) * degs[i - 1];
  int s = (e % 2 == 0) ? 1 : -1;
  return -s;
}

inline Rational factorial(int n) {
  Rational r(1);
  for (int j = 2; j <= n; ++j) r *= j;
  return r;
}
inline Rational inv_factorial(int n) { return Rational(1) / factorial(n); }

inline Rational binomial(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  return factorial(n) / (factorial(k) * factorial(n - k));
}

}  // namespace sflab
