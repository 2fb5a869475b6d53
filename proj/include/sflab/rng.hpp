#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "field.hpp"

namespace sflab {

// Deterministic across platforms: mt19937_64 has a standard-specified
// sequence and we reduce by explicit modulo instead of std distributions.
struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}

  std::uint64_t raw() { return g(); }
  long below(long m) { return (long)(g() % (std::uint64_t)m); }
  long range(long lo, long hi) { return lo + below(hi - lo + 1); }  // inclusive
  bool coin() { return (g() & 1) != 0; }

  Rational small_rat(long num_bound = 3, long den_bound = 3) {
    long num = range(-num_bound, num_bound);
    long den = range(1, den_bound);
    return rat(num, den);
  }
  FieldElement real_field(long d = 2) {
    return FieldElement(small_rat(), Rational(0), small_rat(), Rational(0), d);
  }
  std::vector<long> mode(int n, long bound = 1) {
    std::vector<long> k(n);
    for (auto& x : k) x = range(-bound, bound);
    return k;
  }
};

}  // namespace sflab
