#pragma once

#include <gmpxx.h>

#include <climits>
#include <iosfwd>
#include <string>
#include <vector>

#include "achab/error.hpp"

namespace achab {

// p^k for k >= 0, cached per thread.
const mpz_class& prime_power(long p, int k);

// Exponent of p in n; n must be nonzero.
int valuation_of(const mpz_class& n, long p);
int valuation_of(const mpq_class& q, long p);

enum class Comparison { Equal, Indistinguishable, Distinct };

// Element of Q_p known modulo p^N: value = p^v * u + O(p^N).
// Zero to precision N is stored with v = N and u = 0; exact zero has v = N = kInfinity.
class PadicNumber {
 public:
  static constexpr int kInfinity = INT_MAX;

  PadicNumber() = default;

  static PadicNumber exact_zero(long p);
  static PadicNumber zero(long p, int precision);
  static PadicNumber integer(long p, const mpz_class& n, int precision);
  static PadicNumber integer(long p, long n, int precision) { return integer(p, mpz_class(n), precision); }
  static PadicNumber rational(long p, const mpq_class& q, int precision);
  // p^v * u + O(p^precision); u may be divisible by p or zero.
  static PadicNumber from_parts(long p, int v, const mpz_class& u, int precision);
  static PadicNumber parse(const std::string& text, long p, int default_precision = 12);

  long prime() const { return p_; }
  int valuation() const { return v_; }
  int precision() const { return n_; }
  int relative_precision() const { return is_exact_zero() ? kInfinity : n_ - v_; }
  const mpz_class& unit() const { return u_; }

  bool is_exact_zero() const { return n_ == kInfinity; }
  bool is_zero() const { return v_ >= n_; }
  bool is_unit() const { return v_ == 0 && !is_zero(); }
  bool is_integral() const { return v_ >= 0; }

  // Lowers the precision to min(N, precision()).
  PadicNumber truncated(int precision) const;
  // Treats the stored digits as exact and pads with zeros up to the new precision.
  PadicNumber lifted(int precision) const;

  // Residue mod p; requires valuation >= 0.
  long residue() const;
  // Representative in [0, p^N) for integral values.
  mpz_class to_integer() const;
  // The rational p^v * u (digits beyond precision dropped).
  mpq_class to_rational() const;

  PadicNumber operator-() const;
  PadicNumber& operator+=(const PadicNumber& other);
  PadicNumber& operator-=(const PadicNumber& other);
  PadicNumber& operator*=(const PadicNumber& other);
  PadicNumber& operator/=(const PadicNumber& other);

  // Multiplication and division by exact integers.
  PadicNumber scaled(const mpz_class& k) const;
  PadicNumber divided(const mpz_class& k) const;
  PadicNumber scaled(const mpq_class& q) const;

  PadicNumber inverse() const;
  PadicNumber pow(long e) const;

  std::string to_string() const;

 private:
  void check_prime(const PadicNumber& other) const;

  long p_ = 0;
  int v_ = kInfinity;
  int n_ = kInfinity;
  mpz_class u_;
};

PadicNumber operator+(PadicNumber a, const PadicNumber& b);
PadicNumber operator-(PadicNumber a, const PadicNumber& b);
PadicNumber operator*(PadicNumber a, const PadicNumber& b);
PadicNumber operator/(PadicNumber a, const PadicNumber& b);
PadicNumber operator*(const PadicNumber& a, long k);
PadicNumber operator*(long k, const PadicNumber& a);
PadicNumber operator+(const PadicNumber& a, long k);
PadicNumber operator-(const PadicNumber& a, long k);

Comparison compare(const PadicNumber& a, const PadicNumber& b);
inline bool operator==(const PadicNumber& a, const PadicNumber& b) { return compare(a, b) != Comparison::Distinct; }
inline bool operator!=(const PadicNumber& a, const PadicNumber& b) { return !(a == b); }

std::ostream& operator<<(std::ostream& os, const PadicNumber& x);

// Logarithm on the branch with log(p) = 0.
PadicNumber iwasawa_log(const PadicNumber& x);

// (p-1)-th root of unity congruent to x mod p.
PadicNumber teichmuller(const PadicNumber& x, int precision = 0);

// Square root congruent to `root_mod_p` (or any root when negative); throws NotAUnit
// if no root exists.
PadicNumber padic_sqrt(const PadicNumber& x, long root_mod_p = -1);

// Lift a simple root mod p of an integer polynomial (coefficients low degree first).
mpz_class hensel_lift(const std::vector<mpz_class>& poly, long root_mod_p, long p, int precision);

}  // namespace achab
