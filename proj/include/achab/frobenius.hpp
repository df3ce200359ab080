#pragma once

#include <gmpxx.h>

#include <vector>

#include "achab/curvegeom.hpp"
#include "achab/padic.hpp"
#include "achab/parallel.hpp"
#include "achab/qlinalg.hpp"

namespace achab {

// y^2 = f(x) with f in Z_p[x] (coefficient of x^i at index i), good reduction at p.
class HyperellipticCurve {
 public:
  HyperellipticCurve() = default;
  HyperellipticCurve(long p, std::vector<PadicNumber> f);
  static HyperellipticCurve from_integers(const std::vector<mpz_class>& f, long p, int precision);

  long prime() const { return p_; }
  const std::vector<PadicNumber>& f() const { return f_; }
  int degree() const { return static_cast<int>(f_.size()) - 1; }
  int genus() const { return (degree() - 1) / 2; }
  bool even_degree() const { return degree() % 2 == 0; }
  // Number of forms x^i dx/y, i = 0 .. degree - 2.
  int dimension() const { return degree() - 1; }
  // Smallest precision among the coefficients.
  int coefficient_precision() const;

  PadicNumber eval(const PadicNumber& x) const;
  PadicNumber eval_derivative(const PadicNumber& x) const;
  bool on_curve(const PadicPoint& pt) const;
  // Point in a disc where y reduces to zero.
  bool in_weierstrass_disc(const PadicPoint& pt) const;
  bool in_infinite_disc(const PadicPoint& pt) const;
  bool same_disc(const PadicPoint& a, const PadicPoint& b) const;
  PadicPoint involution(const PadicPoint& pt) const;

 private:
  long p_ = 0;
  std::vector<PadicNumber> f_;
};

// Exact part h(x, y) = sum_m B_m(x) y^(1 - 2m) + A(x) y of a Frobenius pullback.
struct ExactPart {
  std::vector<std::vector<PadicNumber>> inverse_odd;  // index m >= 1
  std::vector<PadicNumber> times_y;
  PadicNumber evaluate(const PadicNumber& x, const PadicNumber& y) const;
};

// phi^*(x^i dx/y) = d h_i + sum_j M(i, j) x^j dx/y for the lift x -> x^p.
struct FrobeniusData {
  long p = 0;
  int precision = 0;
  int working_precision = 0;
  int series_terms = 0;
  PadicMatrix matrix;
  std::vector<ExactPart> exact;

  PadicNumber trace() const;
};

FrobeniusData frobenius_matrix(const HyperellipticCurve& curve, int precision,
                               Execution mode = Execution::Parallel);

// Coefficient precision the curve must carry for frobenius_matrix at this target.
int frobenius_input_precision(const HyperellipticCurve& curve, int precision);

// #X(F_p) of the smooth projective model, by enumeration.
long count_points(const HyperellipticCurve& curve);
// #X(F_p) read off the trace of Frobenius.
long count_points_from_frobenius(const HyperellipticCurve& curve, const FrobeniusData& data);

// Integrals of x^i dx/y, i = 0 .. degree - 2, between points of one residue disc.
std::vector<PadicNumber> tiny_integrals_on_basis(const HyperellipticCurve& curve, const PadicPoint& P,
                                                 const PadicPoint& Q, int precision);

// Coleman integrals of x^i dx/y from P to Q. Points at infinity are accepted for odd degree.
std::vector<PadicNumber> coleman_integrals_on_basis(const HyperellipticCurve& curve, const FrobeniusData& data,
                                                    const PadicPoint& P, const PadicPoint& Q, int precision);

// Frobenius-fixed point in the disc of a finite non-Weierstrass point.
PadicPoint teichmuller_point(const HyperellipticCurve& curve, const PadicPoint& pt, int precision);

}  // namespace achab
