#include "achab/coleman.hpp"

#include <algorithm>

namespace achab {

namespace {

constexpr int kPointSlack = 10;
constexpr int kFrobeniusSlack = 2;

IntegrationMethod weaker(IntegrationMethod a, IntegrationMethod b) { return std::max(a, b); }

std::vector<IntegralValue> wrap_values(const std::vector<PadicNumber>& values, IntegrationMethod method,
                                       int precision) {
  std::vector<IntegralValue> out;
  for (const auto& v : values) out.push_back({v, method, std::max(0, precision - v.precision())});
  return out;
}

std::vector<IntegralValue> difference(const std::vector<IntegralValue>& a, const std::vector<IntegralValue>& b,
                                      int precision) {
  std::vector<IntegralValue> out;
  for (size_t j = 0; j < a.size(); ++j) {
    PadicNumber v = a[j].value - b[j].value;
    out.push_back({v, weaker(a[j].method, b[j].method), std::max(0, precision - v.precision())});
  }
  return out;
}

bool in_origin_disc(const PadicPoint& P) {
  return !P.infinite && (P.x.is_zero() || P.x.valuation() > 0);
}

}  // namespace

std::string to_string(IntegrationMethod method) {
  switch (method) {
    case IntegrationMethod::Tiny: return "tiny";
    case IntegrationMethod::Frobenius: return "frobenius";
    case IntegrationMethod::Pullback: return "pullback";
    case IntegrationMethod::Imported: return "imported";
  }
  return "unknown";
}

IntegralValue tiny_integral(const CurveProblem& problem, const LogDifferential& omega, const PadicPoint& P,
                            const PadicPoint& Q) {
  ResidueDisc d = disc_of(problem, P);
  if (!same_disc(d, disc_of(problem, Q))) fail(ErrorCode::DifferentDiscs, "endpoints lie in different residue discs");
  TruncatedSeries F = formal_antiderivative(expand_differential_on_disc(problem, omega, d));
  PadicNumber v = F.evaluate(disc_parameter(d, Q)) - F.evaluate(disc_parameter(d, P));
  return {v, IntegrationMethod::Tiny, std::max(0, problem.precision() - v.precision())};
}

std::vector<PadicNumber> tiny_integrals(const CurveProblem& problem, const PadicPoint& P, const PadicPoint& Q) {
  ResidueDisc d = disc_of(problem, P);
  if (!same_disc(d, disc_of(problem, Q))) fail(ErrorCode::DifferentDiscs, "endpoints lie in different residue discs");
  PadicNumber tp = disc_parameter(d, P), tq = disc_parameter(d, Q);
  std::vector<PadicNumber> out;
  for (int j = 0; j < problem.basis_size(); ++j) {
    TruncatedSeries F = formal_antiderivative(expand_differential_on_disc(problem, j, d));
    out.push_back(F.evaluate(tq) - F.evaluate(tp));
  }
  return out;
}

ColemanIntegrator::ColemanIntegrator(const CurveProblem& problem, Execution mode) : problem_(problem) {
  problem_.validate();
  long p = problem_.prime();
  frobenius_precision_ = problem_.precision() + kFrobeniusSlack;
  if (problem_.family() == CurveFamily::Hyperelliptic) {
    HyperellipticCurve probe = HyperellipticCurve::from_integers(problem_.f(), p, 1);
    int kin = frobenius_input_precision(probe, frobenius_precision_);
    hyper_ = std::make_shared<HyperellipticCurve>(HyperellipticCurve::from_integers(problem_.f(), p, kin));
    hyper_data_ = frobenius_matrix(*hyper_, frobenius_precision_, mode);
  } else {
    super_ = std::make_shared<SuperellipticIntegrator>(problem_, frobenius_precision_, mode);
  }
}

PadicPoint ColemanIntegrator::embed(const RationalPoint& pt) const {
  return to_padic(pt, problem_.prime(), problem_.precision() + kPointSlack);
}

std::vector<IntegralValue> ColemanIntegrator::from_base_unchecked(const PadicPoint& P) const {
  int n = problem_.precision();
  PadicPoint B = embed(problem_.base_point());
  if (!P.infinite && same_disc(disc_of(problem_, B), disc_of(problem_, P)))
    return wrap_values(tiny_integrals(problem_, B, P), IntegrationMethod::Tiny, n);
  if (hyper_) {
    auto all = coleman_integrals_on_basis(*hyper_, hyper_data_, B, P, frobenius_precision_);
    all.resize(problem_.basis_size());
    return wrap_values(all, IntegrationMethod::Frobenius, n);
  }
  long p = problem_.prime();
  PadicPoint origin{PadicNumber::exact_zero(p), PadicNumber::exact_zero(p), false};
  auto from_origin = [&](const PadicPoint& X) {
    if (in_origin_disc(X)) return wrap_values(tiny_integrals(problem_, origin, X), IntegrationMethod::Tiny, n);
    return wrap_values(super_->from_origin(X), IntegrationMethod::Pullback, n);
  };
  return difference(from_origin(P), from_origin(B), n);
}

std::vector<IntegralValue> ColemanIntegrator::from_base(const PadicPoint& P) const {
  if (!P.infinite && !problem_.on_curve(P)) fail(ErrorCode::NotOnCurve, "endpoint is not on the curve");
  return from_base_unchecked(P);
}

std::vector<IntegralValue> ColemanIntegrator::from_base(const RationalPoint& P) const {
  return basis_integrals(problem_.base_point(), P);
}

std::vector<IntegralValue> ColemanIntegrator::basis_integrals(const PadicPoint& P, const PadicPoint& Q) const {
  int n = problem_.precision();
  if (!P.infinite && !Q.infinite) {
    ResidueDisc d = disc_of(problem_, P);
    if (d.kind != DiscKind::Cuspidal && same_disc(d, disc_of(problem_, Q)))
      return wrap_values(tiny_integrals(problem_, P, Q), IntegrationMethod::Tiny, n);
  }
  return difference(from_base(Q), from_base(P), n);
}

std::vector<IntegralValue> ColemanIntegrator::basis_integrals(const RationalPoint& P, const RationalPoint& Q) const {
  if (!problem_.on_curve(P)) fail(ErrorCode::NotOnCurve, to_string(P) + " is not on the curve");
  if (!problem_.on_curve(Q)) fail(ErrorCode::NotOnCurve, to_string(Q) + " is not on the curve");
  int n = problem_.precision();
  int count = problem_.basis_size();
  std::map<int, PadicNumber> pinned;
  auto it = imported_.find({to_string(P), to_string(Q)});
  if (it != imported_.end()) pinned = it->second;
  auto rit = imported_.find({to_string(Q), to_string(P)});
  if (rit != imported_.end())
    for (const auto& [j, v] : rit->second) pinned.emplace(j, -v);
  std::vector<IntegralValue> out;
  if (static_cast<int>(pinned.size()) == count) {
    for (int j = 0; j < count; ++j) out.push_back({pinned[j], IntegrationMethod::Imported, 0});
    return out;
  }
  out = basis_integrals(embed(P), embed(Q));
  for (const auto& [j, v] : pinned) out[j] = {v, IntegrationMethod::Imported, std::max(0, n - v.precision())};
  return out;
}

IntegralValue combine(const LogDifferential& omega, const std::vector<IntegralValue>& basis, int precision) {
  long p = basis.empty() ? 0 : basis.front().value.prime();
  IntegralValue out{PadicNumber::exact_zero(p), IntegrationMethod::Tiny, 0};
  for (size_t j = 0; j < basis.size(); ++j) {
    if (omega.coefficients[j].is_exact_zero()) continue;
    out.value += omega.coefficients[j] * basis[j].value;
    out.method = weaker(out.method, basis[j].method);
  }
  out.loss = std::max(0, precision - out.value.precision());
  return out;
}

IntegralValue ColemanIntegrator::integrate(const LogDifferential& omega, const PadicPoint& P,
                                           const PadicPoint& Q) const {
  return combine(omega, basis_integrals(P, Q), problem_.precision());
}

IntegralValue ColemanIntegrator::integrate(const LogDifferential& omega, const RationalPoint& P,
                                           const RationalPoint& Q) const {
  return combine(omega, basis_integrals(P, Q), problem_.precision());
}

void ColemanIntegrator::import(std::vector<ImportedIntegral> table, const std::string& curve_id) {
  for (auto& entry : table) {
    if (!entry.curve_id.empty() && entry.curve_id != curve_id) continue;
    if (entry.differential < 0 || entry.differential >= problem_.basis_size())
      fail(ErrorCode::ShapeMismatch, "imported integral names differential " + std::to_string(entry.differential));
    if (entry.value.prime() != problem_.prime())
      fail(ErrorCode::PrimeMismatch, "imported integral is over a different prime");
    imported_[{to_string(entry.from), to_string(entry.to)}][entry.differential] = entry.value;
  }
}

ResidueCheck residue_theorem_check(const ColemanIntegrator& integrator, const PrincipalDivisor& f,
                                   const LogDifferential& omega) {
  const CurveProblem& problem = integrator.problem();
  long p = problem.prime();
  int n = problem.precision();
  ResidueCheck out{PadicNumber::exact_zero(p), PadicNumber::exact_zero(p)};
  int degree = 0;
  for (const auto& [pt, m] : f.points) {
    out.lhs += combine(omega, integrator.from_base(pt), n).value.scaled(mpz_class(m));
    degree += m;
  }
  if (degree != 0) fail(ErrorCode::InvalidProblem, "divisor of a function on Y must have degree zero");
  std::vector<GeometricCuspResidue> res = geometric_residues(problem, omega, n + kPointSlack);
  if (res.size() != f.cusp_values.size())
    fail(ErrorCode::ShapeMismatch, "expected one cusp value per geometric cusp");
  for (size_t k = 0; k < res.size(); ++k) {
    if (res[k].residue.is_zero() && res[k].residue.is_exact_zero()) continue;
    out.rhs += res[k].residue * iwasawa_log(f.cusp_values[k]);
  }
  return out;
}

}  // namespace achab
