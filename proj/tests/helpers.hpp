#pragma once

#include <functional>

#include "sflab/rng.hpp"
#include "sflab/setup.hpp"

namespace sflab {

inline FourierScalar rand_trig(Rng& r, int n) {
  FourierScalar f = FourierScalar::constant(n, r.small_rat());
  for (int t = 0; t < 2; ++t) {
    FieldElement c = r.real_field(2);
    if (c.is_zero()) continue;
    f += (r.coin() ? FourierScalar::cos_mode(n, r.mode(n, 1))
                   : FourierScalar::sin_mode(n, r.mode(n, 1))) *
         c;
  }
  return f;
}

// a couple of random monomials of the given degree
inline FMultiVector rand_mv(Rng& r, int n, int deg) {
  FMultiVector out(n);
  if (deg == 0) {
    out.add_term({}, rand_trig(r, n));
    return out;
  }
  for (int rep = 0; rep < 2; ++rep) {
    std::vector<int> t;
    for (int i = 1; i <= n && (int)t.size() < deg; ++i)
      if (r.coin() || n - i < deg - (int)t.size()) t.push_back(i);
    out.add_term(t, rand_trig(r, n));
  }
  return out;
}

// mixed degrees up to maxdeg
inline FMultiVector rand_mixed(Rng& r, int n, int maxdeg) {
  FMultiVector out(n);
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(mask) > maxdeg || r.below(3) == 0) continue;
    std::vector<int> t;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) t.push_back(i + 1);
    out.add_term(t, rand_trig(r, n));
  }
  return out;
}

// homogeneous good multivector: frame monomials with <= 1 complement leg
inline FMultiVector rand_good_deg(const TorusPoissonSetup& s, Rng& r, int deg) {
  FMultiVector zf(s.n);
  if (deg == 0) {
    zf.add_term({}, rand_trig(r, s.n));
    return zf;
  }
  std::vector<std::vector<int>> tuples;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if ((int)cur.size() == deg) {
      int c = 0;
      for (int i : cur)
        if (i > s.leaf) ++c;
      if (c <= 1) tuples.push_back(cur);
      return;
    }
    for (int i = start; i <= s.n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(1);
  for (const auto& t : tuples)
    if (r.coin()) zf.add_term(t, rand_trig(r, s.n));
  return from_frame(zf, s.frame);
}

// good bivector (the deformation-series coefficient shape)
inline FMultiVector rand_good_bivector(const TorusPoissonSetup& s, Rng& r) {
  return rand_good_deg(s, r, 2);
}

}  // namespace sflab
