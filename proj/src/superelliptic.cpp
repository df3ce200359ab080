#include "achab/superelliptic.hpp"

namespace achab {

namespace {

constexpr int kPointSlack = 10;

}  // namespace

SuperellipticIntegrator::SuperellipticIntegrator(const CurveProblem& problem, int precision, Execution mode)
    : problem_(problem), precision_(precision) {
  if (problem.family() != CurveFamily::SuperellipticCubic)
    fail(ErrorCode::UnsupportedFamily, "superelliptic integration needs the cubic family");
  long p = problem.prime();
  long a = problem.parameter_a();
  if (a % p == 0) fail(ErrorCode::BadReduction, "p must not divide a");
  mpq_class c = mpq_class(a * a, 4) - 1;
  mpq_class four_over_a2(4, a * a);

  // input precision is sized for the largest curve in the family of four
  HyperellipticCurve probe = HyperellipticCurve::from_integers({1, 1, 1, 1, 1}, p, 1000);
  int kin = frobenius_input_precision(probe, precision);

  chart_ = HyperellipticCurve(p, {PadicNumber::rational(p, c, kin), PadicNumber::exact_zero(p),
                                  PadicNumber::exact_zero(p), PadicNumber::integer(p, 1, kin)});
  chart_data_ = frobenius_matrix(chart_, precision, mode);

  zeta_.push_back(PadicNumber::integer(p, 1, kin));
  for (const auto& phi : hensel_embed(RationalPoly{1, 1, 1}, p, kin)) zeta_.push_back(phi.root());
  if (zeta_.size() != 3) fail(ErrorCode::NonSeparableReduction, "p must be 1 mod 3");
  for (const auto& z : zeta_) {
    PadicNumber k = PadicNumber::rational(p, four_over_a2, kin);
    std::vector<PadicNumber> f = {PadicNumber::exact_zero(p), k, k * z * 3, k * z * z * 3,
                                  PadicNumber::integer(p, 1, kin)};
    aux_.emplace_back(p, f);
  }
  for (const auto& curve : aux_) aux_data_.push_back(frobenius_matrix(curve, precision, mode));
}

PadicPoint SuperellipticIntegrator::to_chart(const PadicPoint& P) const {
  long p = problem_.prime();
  PadicNumber half_a = PadicNumber::rational(p, mpq_class(problem_.parameter_a(), 2), precision_ + kPointSlack);
  PadicNumber xinv = P.x.inverse();
  return PadicPoint{P.y * xinv, xinv + half_a, false};
}

PadicPoint SuperellipticIntegrator::to_auxiliary(int k, const PadicPoint& q) const {
  long p = problem_.prime();
  PadicNumber d = q.x - zeta_[k];
  PadicNumber s = d.inverse();
  PadicNumber two_over_a = PadicNumber::rational(p, mpq_class(-2, problem_.parameter_a()), precision_ + kPointSlack);
  return PadicPoint{s, two_over_a * q.y * s * s, false};
}

bool SuperellipticIntegrator::restricted(const PadicPoint& P) const {
  if (P.infinite || (!P.x.is_zero() && P.x.valuation() < 0)) return true;
  if (P.x.is_zero() || P.x.valuation() > 0) return false;
  PadicPoint q = to_chart(P);
  for (const auto& z : zeta_) {
    PadicNumber d = q.x - z;
    if (d.is_zero() || d.valuation() > 0) return true;
  }
  return false;
}

std::vector<PadicNumber> SuperellipticIntegrator::from_origin(const PadicPoint& P) const {
  long p = problem_.prime();
  if (!P.x.is_zero() && P.x.valuation() == 0 && restricted(P))
    fail(ErrorCode::EndpointRestriction, "endpoint lies in a cusp disc or its involution image");
  if (P.infinite || P.x.is_zero() || P.x.valuation() != 0)
    fail(ErrorCode::EndpointRestriction, "transport needs an endpoint with unit x-coordinate");
  PadicPoint q = to_chart(P);
  PadicPoint origin{PadicNumber::exact_zero(p), PadicNumber::exact_zero(p), true};
  int n = precision_;

  // omega_1 = -(3/2) du'/v'
  std::vector<PadicNumber> e = coleman_integrals_on_basis(chart_, chart_data_, origin, q, n);
  PadicNumber w1 = e[0].scaled(mpq_class(-3, 2));

  // symmetric parts via logs on P^1, antisymmetric parts via X_zeta
  PadicNumber plus2 = PadicNumber::exact_zero(p), plus3 = PadicNumber::exact_zero(p);
  PadicNumber minus2 = PadicNumber::exact_zero(p), minus3 = PadicNumber::exact_zero(p);
  for (size_t k = 0; k < zeta_.size(); ++k) {
    const PadicNumber& z = zeta_[k];
    PadicNumber zinv = z * z;
    PadicNumber lg = iwasawa_log(PadicNumber::integer(p, 1, n + kPointSlack) - z * q.x);
    plus2 += zinv * lg;
    plus3 += z * lg;
    PadicPoint tp = to_auxiliary(static_cast<int>(k), q);
    PadicPoint tm = aux_[k].involution(tp);
    PadicNumber I = coleman_integrals_on_basis(aux_[k], aux_data_[k], tm, tp, n)[1];
    minus2 += z * I;
    minus3 += zinv * I;
  }
  PadicNumber w2 = plus2.scaled(mpq_class(-1, 2)) + minus2.scaled(mpq_class(-1, 4));
  PadicNumber w3 = plus3.scaled(mpq_class(-1, 2)) + minus3.scaled(mpq_class(-1, 4));
  return {w1, w2, w3};
}

}  // namespace achab
