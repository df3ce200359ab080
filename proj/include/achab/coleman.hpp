#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "achab/curvegeom.hpp"
#include "achab/frobenius.hpp"
#include "achab/parallel.hpp"
#include "achab/superelliptic.hpp"

namespace achab {

enum class IntegrationMethod { Tiny, Frobenius, Pullback, Imported };

std::string to_string(IntegrationMethod method);

struct IntegralValue {
  PadicNumber value;
  IntegrationMethod method = IntegrationMethod::Tiny;
  // Digits lost against the requested precision.
  int loss = 0;
};

// Externally computed integral of one basis form between two rational points.
struct ImportedIntegral {
  std::string curve_id;
  int differential = 0;
  RationalPoint from;
  RationalPoint to;
  PadicNumber value;
};

// Tiny integral of omega between two points of one residue disc.
IntegralValue tiny_integral(const CurveProblem& problem, const LogDifferential& omega, const PadicPoint& P,
                            const PadicPoint& Q);
// Tiny integrals of every basis form.
std::vector<PadicNumber> tiny_integrals(const CurveProblem& problem, const PadicPoint& P, const PadicPoint& Q);

// Global Coleman integration on a curve problem. Frobenius data is computed
// once at construction and shared read-only afterwards.
class ColemanIntegrator {
 public:
  explicit ColemanIntegrator(const CurveProblem& problem, Execution mode = Execution::Parallel);

  const CurveProblem& problem() const { return problem_; }
  int precision() const { return problem_.precision(); }
  // Coordinates of a rational point at working precision.
  PadicPoint embed(const RationalPoint& pt) const;

  // Integrals of all basis forms from the base point to P.
  std::vector<IntegralValue> from_base(const PadicPoint& P) const;
  std::vector<IntegralValue> from_base(const RationalPoint& P) const;
  // Integrals of all basis forms from P to Q.
  std::vector<IntegralValue> basis_integrals(const PadicPoint& P, const PadicPoint& Q) const;
  std::vector<IntegralValue> basis_integrals(const RationalPoint& P, const RationalPoint& Q) const;

  IntegralValue integrate(const LogDifferential& omega, const PadicPoint& P, const PadicPoint& Q) const;
  IntegralValue integrate(const LogDifferential& omega, const RationalPoint& P, const RationalPoint& Q) const;

  void import(std::vector<ImportedIntegral> table, const std::string& curve_id);
  size_t imported_count() const { return imported_.size(); }

  const FrobeniusData* frobenius() const { return hyper_ ? &hyper_data_ : nullptr; }
  const SuperellipticIntegrator* superelliptic() const { return super_.get(); }

 private:
  std::vector<IntegralValue> from_base_unchecked(const PadicPoint& P) const;

  CurveProblem problem_;
  int frobenius_precision_ = 0;
  std::shared_ptr<HyperellipticCurve> hyper_;
  FrobeniusData hyper_data_;
  std::shared_ptr<SuperellipticIntegrator> super_;
  std::map<std::pair<std::string, std::string>, std::map<int, PadicNumber>> imported_;
};

IntegralValue combine(const LogDifferential& omega, const std::vector<IntegralValue>& basis, int precision);

// A rational function on X given by its divisor (points of Y over Q_p) and its
// values at the geometric cusps, in the order of geometric_residues.
struct PrincipalDivisor {
  std::vector<std::pair<PadicPoint, int>> points;
  std::vector<PadicNumber> cusp_values;
};

struct ResidueCheck {
  PadicNumber lhs;
  PadicNumber rhs;
};

// lhs = integral of omega over div f, rhs = sum over geometric cusps of Res(omega) log f.
ResidueCheck residue_theorem_check(const ColemanIntegrator& integrator, const PrincipalDivisor& f,
                                   const LogDifferential& omega);

}  // namespace achab
