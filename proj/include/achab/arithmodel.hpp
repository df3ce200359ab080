#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "achab/curvegeom.hpp"
#include "achab/numfield.hpp"
#include "achab/qlinalg.hpp"

namespace achab {

struct Component {
  std::string id;
  int multiplicity = 1;
  // Component of the smooth locus away from D carrying an F_q-point.
  bool eligible = true;
};

// Special fibre over a bad prime q of the regular model.
struct Fibre {
  long prime = 0;
  std::vector<Component> components;
  RationalMatrix intersection;
  // i_q(object, component) for marked objects: points by name, cusp primes by lambda id.
  std::map<std::string, std::vector<mpq_class>> incidences;

  int component_index(const std::string& id) const;
  // Component met by an object with a single nonzero incidence.
  int component_of(const std::string& object) const;
  std::vector<mpq_class> multiplicities() const;
};

// A prime lambda of the ring of integers of k(Q) above q.
struct CuspPrime {
  std::string cusp;
  std::string id;
  long over_prime = 0;
  int e = 1;
  int f = 1;
  RationalPower generator;
  // Residue of the field generator modulo lambda, for split primes.
  std::optional<long> root_mod;
};

struct IntersectionOverride {
  std::string object;
  std::string lambda;
  mpq_class value;
};

struct RegularModelData {
  std::vector<Fibre> fibres;
  std::vector<CuspPrime> cusp_primes;
  std::vector<IntersectionOverride> overrides;
  // Primes where the plane model is regular along the cusp closures.
  std::vector<long> regular_at_cusps;
  // Primes over which the cusp closures meet the fibre transversally.
  std::vector<long> transversal;

  const Fibre* fibre(long q) const;
  const CuspPrime& cusp_prime(const std::string& id) const;
  std::vector<const CuspPrime*> primes_of(const std::string& cusp, long q) const;
  std::vector<long> bad_primes() const;
  void validate(const CurveProblem& problem) const;
};

// Phi_q(G) = -M^+ (incidence of G), shifted by a fibre multiple to vanish on `anchor`.
struct CorrectionDivisor {
  long prime = 0;
  std::vector<mpq_class> coefficients;
};

CorrectionDivisor correction_divisor(const Fibre& fibre, const std::vector<mpq_class>& incidence, int anchor);
// Intersection of G + Phi with every component; zero when Phi is a correction for G.
std::vector<mpq_class> corrected_intersections(const Fibre& fibre, const std::vector<mpq_class>& incidence,
                                               const CorrectionDivisor& phi);

// v_lambda of an element of k(Q).
mpq_class lambda_valuation(const CuspPrime& lambda, const NumberField& field, const FieldElement& x);

// i_lambda(E, closure of Q) for a point E of Y(Q), labelled `object` for override lookup.
mpq_class horizontal_intersection(const CurveProblem& problem, const RegularModelData& model,
                                  const RationalPoint& E, const std::string& object, const CuspPrime& lambda);

// i_lambda(V, closure of Q) for a vertical divisor V over q given by component coefficients.
mpq_class vertical_intersection(const RegularModelData& model, const CuspPrime& lambda,
                                const std::vector<mpq_class>& coefficients);

struct ReductionChoice {
  long prime = 0;
  // Component index, or -1 with `cusp_point` naming the lambda of a cuspidal point.
  int component = -1;
  std::string cusp_point;
  bool cuspidal() const { return component < 0; }
};

struct ReductionType {
  std::vector<ReductionChoice> choices;
  std::string label() const;
  // Lambda ids of the cuspidal part.
  std::vector<std::string> cuspidal_part() const;
  // Primes of S where the type is cuspidal.
  std::vector<long> support() const;
  const ReductionChoice* choice(long q) const;
};

std::vector<ReductionType> enumerate_reduction_types(const CurveProblem& problem, const RegularModelData& model);

struct SelmerTarget {
  std::map<std::string, mpq_class> b;
  // Basis of U: one coefficient map per cuspidal prime of S.
  std::vector<std::map<std::string, mpq_class>> u;
  bool b_is_zero() const;
};

SelmerTarget selmer_target(const CurveProblem& problem, const RegularModelData& model, const ReductionType& sigma,
                           const std::string& base_object = "P0");

// Checks prod_{lambda | q} pi_lambda^e = q in k^x (x) Q by norms and by p-adic logs.
void check_generator_compatibility(const CurveProblem& problem, const RegularModelData& model, int precision);

}  // namespace achab
