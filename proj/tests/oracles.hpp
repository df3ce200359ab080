#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "achab/pseries.hpp"
#include "support.hpp"

namespace achab::testing {

// Polynomial over Z/p^N given by residues, low degree first.
struct ResiduePoly {
  long p = 7;
  int N = 6;
  std::vector<long long> c;

  long long modulus() const {
    long long m = 1;
    for (int i = 0; i < N; ++i) m *= p;
    return m;
  }
  long long eval(long long r) const {
    long long m = modulus(), acc = 0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) acc = (acc * r + c[i]) % m;
    return acc;
  }
  long long derivative_mod_p(long long r) const {
    long long acc = 0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 1; --i) acc = (acc * (r % p) + i * (c[i] % p)) % p;
    return acc;
  }
  TruncatedSeries series() const {
    std::vector<PadicNumber> coeffs;
    for (long long v : c) coeffs.push_back(PadicNumber::integer(p, mpz_class(static_cast<long>(v)), N));
    return TruncatedSeries(p, coeffs);
  }
};

// Residues r mod p^N with f(r) = 0 mod p^N.
inline std::vector<long long> brute_force_roots(const ResiduePoly& f) {
  std::vector<long long> out;
  long long m = f.modulus();
  for (long long r = 0; r < m; ++r)
    if (f.eval(r) == 0) out.push_back(r);
  return out;
}

// Every brute-force residue has a unit derivative, so residues and roots in Z_p correspond one to one.
inline bool hensel_clean(const ResiduePoly& f, const std::vector<long long>& residues) {
  for (long long r : residues)
    if (f.derivative_mod_p(r) == 0) return false;
  return true;
}

// Degree <= 5: half plain random, half built from roots with distinct residues times a random cofactor.
inline ResiduePoly random_residue_poly(std::mt19937_64& rng, long p, int N) {
  ResiduePoly f{p, N, {}};
  long long m = f.modulus();
  std::uniform_int_distribution<long long> coeff(0, m - 1);
  std::uniform_int_distribution<int> deg(1, 5);
  if (rng() % 2 == 0) {
    int d = deg(rng);
    for (int i = 0; i <= d; ++i) f.c.push_back(coeff(rng));
    return f;
  }
  int k = std::uniform_int_distribution<int>(1, 3)(rng);
  std::vector<long> residues(p);
  for (long i = 0; i < p; ++i) residues[i] = i;
  std::shuffle(residues.begin(), residues.end(), rng);
  f.c = {1};
  auto times_linear = [&](long long root) {
    std::vector<long long> next(f.c.size() + 1, 0);
    for (size_t i = 0; i < f.c.size(); ++i) {
      next[i + 1] = (next[i + 1] + f.c[i]) % m;
      next[i] = ((next[i] - (root % m) * f.c[i]) % m + m) % m;
    }
    f.c = next;
  };
  for (int i = 0; i < k; ++i) times_linear(residues[i] + p * (coeff(rng) % (m / p)));
  int extra = std::uniform_int_distribution<int>(0, 5 - k)(rng);
  std::vector<long long> cof;
  for (int i = 0; i <= extra; ++i) cof.push_back(coeff(rng));
  std::vector<long long> prod(f.c.size() + cof.size() - 1, 0);
  for (size_t i = 0; i < f.c.size(); ++i)
    for (size_t j = 0; j < cof.size(); ++j) prod[i + j] = (prod[i + j] + f.c[i] * cof[j]) % m;
  f.c = prod;
  return f;
}

struct OracleOutcome {
  bool clean = false;
  bool agree = false;
  bool within_bound = false;
};

// Compares strassmann_roots with the brute-force residues. On polynomials that are not Hensel-clean
// an error is accepted; returned roots must still reduce into the brute-force set.
inline OracleOutcome compare_with_brute_force(const ResiduePoly& f) {
  OracleOutcome out;
  auto residues = brute_force_roots(f);
  out.clean = hensel_clean(f, residues);
  try {
    RootIsolation iso = strassmann_roots(f.series());
    out.within_bound = static_cast<int>(iso.roots.size()) <= iso.bound &&
                       (!out.clean || static_cast<int>(residues.size()) <= iso.bound);
    std::set<long long> reported;
    bool reduce_ok = true;
    for (const auto& r : iso.roots) {
      int m = std::min(f.N, r.t.precision());
      long long mod = 1;
      for (int i = 0; i < m; ++i) mod *= f.p;
      long long rep = r.t.is_exact_zero() ? 0 : mpz_class(r.t.to_integer() % static_cast<long>(mod)).get_si();
      if (m == f.N) reported.insert(rep);
      bool hit = false;
      for (long long s : residues) hit = hit || s % mod == rep;
      reduce_ok = reduce_ok && hit;
    }
    if (out.clean) {
      out.agree = reported == std::set<long long>(residues.begin(), residues.end()) &&
                  iso.roots.size() == residues.size();
    } else {
      out.agree = reduce_ok;
    }
  } catch (const Error&) {
    out.within_bound = true;
    out.agree = !out.clean;
  }
  return out;
}

}  // namespace achab::testing
