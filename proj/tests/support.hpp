#pragma once

#include <random>
#include <string>

#include "achab/padic.hpp"
#include "achab/problem.hpp"

namespace achab::testing {

inline std::string fixture(const std::string& name) { return std::string(ACHAB_FIXTURE_DIR) + "/" + name; }

// Valuation certified by the stored precision: a zero to precision N reports N.
inline int certified(const PadicNumber& x) {
  if (x.is_exact_zero()) return PadicNumber::kInfinity;
  return x.is_zero() ? x.precision() : x.valuation();
}

// a and b agree modulo p^k and both are known to at least that precision.
inline bool agrees(const PadicNumber& a, const PadicNumber& b, int k) {
  if (a.precision() < k || b.precision() < k) return false;
  return certified(a - b) >= k;
}

inline bool agrees(const PadicNumber& a, const std::string& digits, int k) {
  return agrees(a, PadicNumber::parse(digits, a.prime(), k), k);
}

inline PadicNumber random_integer(std::mt19937_64& rng, long p, int precision) {
  mpz_class n = 0;
  std::uniform_int_distribution<long> digit(0, p - 1);
  for (int i = 0; i < precision; ++i) n = n * p + digit(rng);
  return PadicNumber::integer(p, n, precision);
}

inline PadicNumber random_unit(std::mt19937_64& rng, long p, int precision) {
  std::uniform_int_distribution<long> digit(1, p - 1);
  PadicNumber x = random_integer(rng, p, precision);
  return x - PadicNumber::integer(p, x.residue(), precision) + PadicNumber::integer(p, digit(rng), precision);
}

}  // namespace achab::testing
