#pragma once

#include <vector>

#include "achab/curvegeom.hpp"
#include "achab/frobenius.hpp"
#include "achab/parallel.hpp"

namespace achab {

// Coleman integration on y^3 = x^3 + a x^2 + x through the elliptic chart
// v'^2 = u'^3 + a^2/4 - 1 (u' = y/x, v' = 1/x + a/2) and the auxiliary curves
// X_zeta: t^2 = (4/a^2) (s (zeta s + 1)^3 + (a^2/4 - 1) s^4).
class SuperellipticIntegrator {
 public:
  SuperellipticIntegrator(const CurveProblem& problem, int precision, Execution mode = Execution::Parallel);

  // Integrals of dx/y^2, x dx/y^2, dx/y from (0, 0) to P.
  std::vector<PadicNumber> from_origin(const PadicPoint& P) const;

  const HyperellipticCurve& elliptic_chart() const { return chart_; }
  const std::vector<HyperellipticCurve>& auxiliary_curves() const { return aux_; }
  const std::vector<PadicNumber>& cube_roots_of_unity() const { return zeta_; }
  // Image (u', v') of an affine point with x a unit.
  PadicPoint to_chart(const PadicPoint& P) const;
  // Image (s, t) on X_zeta of a chart point.
  PadicPoint to_auxiliary(int k, const PadicPoint& chart_point) const;
  // True when P lies where the transport cannot integrate: near a cusp or its involution image.
  bool restricted(const PadicPoint& P) const;

 private:
  CurveProblem problem_;
  int precision_ = 0;
  HyperellipticCurve chart_;
  FrobeniusData chart_data_;
  std::vector<PadicNumber> zeta_;
  std::vector<HyperellipticCurve> aux_;
  std::vector<FrobeniusData> aux_data_;
};

}  // namespace achab
