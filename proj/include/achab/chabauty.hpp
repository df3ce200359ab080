#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "achab/arithmodel.hpp"
#include "achab/coleman.hpp"
#include "achab/curvegeom.hpp"
#include "achab/parallel.hpp"
#include "achab/pseries.hpp"
#include "achab/qlinalg.hpp"

namespace achab {

struct DivisorTerm {
  std::string id;
  RationalPoint point;
  int multiplicity = 1;
};

// Degree-zero divisor supported on Y(Q).
struct MordellWeilDivisor {
  std::string id;
  std::vector<DivisorTerm> terms;
};

// A unit e_i = (e_{i,Q})_Q of the cusp rings.
struct UnitGenerator {
  std::string id;
  std::map<std::string, FieldElement> per_cusp;
};

struct KnownPoint {
  std::string id;
  RationalPoint point;
};

struct ChabautyInputs {
  CurveProblem problem;
  RegularModelData model;
  std::vector<MordellWeilDivisor> generators;
  std::vector<UnitGenerator> units;
  std::vector<KnownPoint> known_points;
  std::string base_id = "P0";
};

struct ConditionCheck {
  bool holds = false;
  int lhs = 0;
  int rhs = 0;
  int slack() const { return rhs - lhs; }
};

// r + #C(Sigma) < g + #|D| + n2(D) - 1 over K = Q.
ConditionCheck check_chabauty_condition(const CurveProblem& problem, int rank, int cuspidal_support);

struct ChabautyMatrix {
  PadicMatrix matrix;
  int r = 0;  // Mordell-Weil rows
  int k = 0;  // unit rows
  int s = 0;  // rows of D(U)
  std::vector<std::string> row_labels;
  // Corrections subtracted from the integrals in the first r rows.
  std::vector<std::vector<PadicNumber>> corrections;
  std::vector<std::vector<PadicNumber>> integrals;
};

enum class CandidateClass { MatchedKnown, Extra };

struct LocusPoint {
  PadicNumber t;
  PadicPoint point;
  CandidateClass kind = CandidateClass::Extra;
  std::string known_id;
};

struct DiscLocus {
  std::string disc;
  bool resolved = true;
  std::string reason;
  TruncatedSeries series;
  int bound = 0;
  std::vector<LocusPoint> points;
};

struct Annihilator {
  std::vector<LogDifferential> forms;
  int loss = 0;
};

struct TypeResult {
  ReductionType sigma;
  ConditionCheck condition;
  SelmerTarget target;
  std::shared_ptr<const ChabautyMatrix> matrix;
  std::shared_ptr<const Annihilator> annihilator;
  std::vector<PadicNumber> constants;  // one per annihilating form
  std::vector<DiscLocus> discs;
  bool complete() const;
};

// int_{P0}^{P} eta - c(P0, Sigma, eta) for each annihilating eta of the point's type.
struct PointCheck {
  std::string id;
  ReductionType sigma;
  bool resolved = true;
  std::string reason;
  std::vector<PadicNumber> values;
  int min_valuation() const;
};

class ChabautyEngine {
 public:
  explicit ChabautyEngine(ChabautyInputs inputs, Execution mode = Execution::Parallel);

  const ChabautyInputs& inputs() const { return inputs_; }
  const CurveProblem& problem() const { return inputs_.problem; }
  const ColemanIntegrator& integrator() const { return *integrator_; }
  int rank() const { return static_cast<int>(inputs_.generators.size()); }

  // Pins externally computed integrals; clears cached results.
  void import_integrals(std::vector<ImportedIntegral> table, const std::string& curve_id);

  std::vector<ReductionType> reduction_types() const;
  ConditionCheck condition(const ReductionType& sigma) const;

  // Integrals of the basis forms from the base point, cached per point.
  std::vector<PadicNumber> base_integrals(const RationalPoint& P) const;
  std::vector<PadicNumber> divisor_integrals(const MordellWeilDivisor& G) const;

  // i_lambda(Psi_q(G), closure of Q), with an optional fibre multiple added to Phi_q.
  mpq_class psi_intersection(const MordellWeilDivisor& G, const CuspPrime& lambda, const mpq_class& fibre_shift = 0) const;
  // Sum over cusps, embeddings and lambda of Res * i_lambda(Psi_q(G)) * log pi_lambda.
  PadicNumber correction(const MordellWeilDivisor& G, const LogDifferential& omega,
                         const std::map<long, mpq_class>& fibre_shift = {}) const;
  PadicNumber pairing_H(const MordellWeilDivisor& G, const LogDifferential& omega,
                        const std::map<long, mpq_class>& fibre_shift = {}) const;

  ChabautyMatrix assemble(const ReductionType& sigma) const;
  Annihilator annihilator(const ChabautyMatrix& m) const;
  PadicNumber constant(const SelmerTarget& target, const LogDifferential& omega) const;

  // rho(t) = integral to the disc centre + tiny series - c.
  TruncatedSeries locus_series(const LogDifferential& omega, const PadicNumber& c, const ResidueDisc& disc) const;
  DiscLocus disc_locus(const std::vector<LogDifferential>& forms, const std::vector<PadicNumber>& constants,
                       const ResidueDisc& disc) const;
  std::vector<DiscLocus> locus(const std::vector<LogDifferential>& forms, const std::vector<PadicNumber>& constants,
                               Execution mode) const;

  // Reduction type of a known S-integral point.
  ReductionType type_of(const KnownPoint& P) const;
  TypeResult solve_type(const ReductionType& sigma) const;
  PointCheck check_point(const KnownPoint& P) const;
  // Key shared by types with the same cuspidal part.
  std::string matrix_key(const ReductionType& sigma) const;

  // det(int_{P0}^{P_i} omega_j - c(P0, Sigma_i, omega_j)).
  PadicNumber determinant_criterion(const std::vector<KnownPoint>& points) const;
  // The same matrix before taking the determinant.
  PadicMatrix criterion_matrix(const std::vector<KnownPoint>& points) const;

 private:
  struct CuspData {
    std::string id;
    std::vector<FieldEmbedding> embeddings;
    // residues[j][e]: image of Res(omega_j) under embedding e.
    std::vector<std::vector<PadicNumber>> residues;
  };

  const CuspData& cusp_data(const std::string& id) const;
  std::vector<PadicNumber> embedded_residues(const CuspData& cusp, const LogDifferential& omega) const;
  // sum over lambda of w_lambda * sum over embeddings of Res(omega) log pi_lambda.
  PadicNumber weighted_log_sum(const LogDifferential& omega, const std::map<std::string, mpq_class>& weights) const;
  std::shared_ptr<const ChabautyMatrix> cached_matrix(const ReductionType& sigma) const;
  std::shared_ptr<const Annihilator> cached_annihilator(const ReductionType& sigma) const;

  ChabautyInputs inputs_;
  Execution mode_;
  std::shared_ptr<ColemanIntegrator> integrator_;
  std::vector<CuspData> cusps_;
  // log of pi_lambda under each embedding of its cusp field.
  std::map<std::string, std::vector<PadicNumber>> log_pi_;
  mutable std::map<std::string, std::vector<PadicNumber>> base_cache_;
  mutable std::map<std::string, std::shared_ptr<const ChabautyMatrix>> matrix_cache_;
  mutable std::map<std::string, std::shared_ptr<const Annihilator>> annihilator_cache_;
};

}  // namespace achab
