#include "achab/arithmodel.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace achab {

namespace {

constexpr int kValuationPrecision = 64;

bool contains(const std::vector<long>& v, long q) { return std::find(v.begin(), v.end(), q) != v.end(); }

mpq_class rational_valuation(const mpq_class& x, long q) {
  if (x == 0) fail(ErrorCode::ZeroInput, "valuation of zero");
  return valuation_of(x, q);
}

// u-coordinate of the cusp on the plane model, as an element of k(Q).
FieldElement cusp_slope(const CurveProblem& problem, const Cusp& cusp) {
  if (problem.family() == CurveFamily::SuperellipticCubic) {
    if (cusp.id == "Q1") return FieldElement::constant(cusp.field, 1);
    return FieldElement::generator(cusp.field);
  }
  mpq_class s = problem.sqrt_leading();
  return FieldElement::constant(cusp.field, cusp.id == "inf-" ? mpq_class(-s) : s);
}

}  // namespace

int Fibre::component_index(const std::string& id) const {
  for (size_t i = 0; i < components.size(); ++i)
    if (components[i].id == id) return static_cast<int>(i);
  fail(ErrorCode::InvalidProblem, "fibre over " + std::to_string(prime) + " has no component '" + id + "'");
}

int Fibre::component_of(const std::string& object) const {
  if (components.size() == 1) return 0;
  auto it = incidences.find(object);
  if (it == incidences.end())
    fail(ErrorCode::MissingIncidence, "no incidence for '" + object + "' over " + std::to_string(prime));
  int found = -1;
  for (size_t i = 0; i < it->second.size(); ++i) {
    if (it->second[i] == 0) continue;
    if (found >= 0) fail(ErrorCode::MissingIncidence, "'" + object + "' meets several components");
    found = static_cast<int>(i);
  }
  if (found < 0) fail(ErrorCode::MissingIncidence, "'" + object + "' meets no component");
  return found;
}

std::vector<mpq_class> Fibre::multiplicities() const {
  std::vector<mpq_class> m;
  for (const auto& c : components) m.emplace_back(c.multiplicity);
  return m;
}

const Fibre* RegularModelData::fibre(long q) const {
  for (const auto& f : fibres)
    if (f.prime == q) return &f;
  return nullptr;
}

const CuspPrime& RegularModelData::cusp_prime(const std::string& id) const {
  for (const auto& l : cusp_primes)
    if (l.id == id) return l;
  fail(ErrorCode::InvalidProblem, "unknown cusp prime '" + id + "'");
}

std::vector<const CuspPrime*> RegularModelData::primes_of(const std::string& cusp, long q) const {
  std::vector<const CuspPrime*> out;
  for (const auto& l : cusp_primes)
    if (l.cusp == cusp && l.over_prime == q) out.push_back(&l);
  return out;
}

std::vector<long> RegularModelData::bad_primes() const {
  std::vector<long> out;
  for (const auto& f : fibres) out.push_back(f.prime);
  std::sort(out.begin(), out.end());
  return out;
}

void RegularModelData::validate(const CurveProblem& problem) const {
  std::set<long> seen;
  for (const auto& f : fibres) {
    if (!seen.insert(f.prime).second) fail(ErrorCode::InvalidProblem, "duplicate fibre over " + std::to_string(f.prime));
    int n = static_cast<int>(f.components.size());
    if (n == 0) fail(ErrorCode::InvalidProblem, "fibre over " + std::to_string(f.prime) + " has no components");
    if (f.intersection.rows() != n || f.intersection.cols() != n)
      fail(ErrorCode::ShapeMismatch, "intersection matrix over " + std::to_string(f.prime) + " has the wrong shape");
    if (!f.intersection.is_symmetric()) fail(ErrorCode::NotSymmetric, "intersection matrix must be symmetric");
    for (const auto& c : f.components)
      if (c.multiplicity < 1) fail(ErrorCode::InvalidProblem, "component multiplicities must be positive");
    for (const auto& v : f.intersection.apply(f.multiplicities()))
      if (v != 0)
        fail(ErrorCode::InvalidProblem, "fibre over " + std::to_string(f.prime) + " does not meet itself trivially");
    for (const auto& [id, inc] : f.incidences)
      if (static_cast<int>(inc.size()) != n)
        fail(ErrorCode::ShapeMismatch, "incidence of '" + id + "' over " + std::to_string(f.prime) + " has wrong length");
  }
  for (const auto& l : cusp_primes) {
    const Cusp& cusp = problem.cusp(l.cusp);
    if (l.e < 1 || l.f < 1 || l.e * l.f > cusp.degree())
      fail(ErrorCode::InvalidProblem, "cusp prime '" + l.id + "' has inconsistent e, f");
    if (l.generator.base.minpoly() != cusp.field.minpoly)
      fail(ErrorCode::InvalidProblem, "generator of '" + l.id + "' lies in the wrong field");
  }
  for (long q : problem.S())
    if (!contains(transversal, q))
      fail(ErrorCode::NotTransversal, "cusp closures are not flagged transversal over " + std::to_string(q));
}

CorrectionDivisor correction_divisor(const Fibre& fibre, const std::vector<mpq_class>& incidence, int anchor) {
  int n = static_cast<int>(fibre.components.size());
  if (static_cast<int>(incidence.size()) != n) fail(ErrorCode::MissingIncidence, "incidence vector has wrong length");
  CorrectionDivisor out;
  out.prime = fibre.prime;
  RationalMatrix pinv = moore_penrose(fibre.intersection);
  out.coefficients = pinv.apply(incidence);
  for (auto& c : out.coefficients) c = -c;
  std::vector<mpq_class> mult = fibre.multiplicities();
  mpq_class shift = -out.coefficients[anchor] / mult[anchor];
  for (int i = 0; i < n; ++i) out.coefficients[i] += shift * mult[i];
  return out;
}

std::vector<mpq_class> corrected_intersections(const Fibre& fibre, const std::vector<mpq_class>& incidence,
                                               const CorrectionDivisor& phi) {
  std::vector<mpq_class> v = fibre.intersection.apply(phi.coefficients);
  for (size_t i = 0; i < v.size(); ++i) v[i] += incidence[i];
  return v;
}

mpq_class lambda_valuation(const CuspPrime& lambda, const NumberField& field, const FieldElement& x) {
  if (x.is_zero()) fail(ErrorCode::ZeroInput, "valuation of zero");
  long q = lambda.over_prime;
  if (field.degree() == 1) return rational_valuation(x.coeffs().empty() ? mpq_class(0) : x.coeffs()[0], q);
  if (lambda.root_mod) {
    for (const auto& phi : hensel_embed(field, q, kValuationPrecision)) {
      if (phi.root().residue() != ((*lambda.root_mod % q) + q) % q) continue;
      PadicNumber y = phi.apply(x);
      if (y.is_zero()) fail(ErrorCode::PrecisionLoss, "lambda-adic valuation exceeds working precision");
      return mpq_class(y.valuation());
    }
    fail(ErrorCode::InvalidProblem, "no embedding matches the residue of '" + lambda.id + "'");
  }
  if (lambda.e * lambda.f == field.degree()) return rational_valuation(x.norm(), q) / lambda.f;
  fail(ErrorCode::NeedsOverride, "valuation at '" + lambda.id + "' needs an embedding or an override");
}

mpq_class horizontal_intersection(const CurveProblem& problem, const RegularModelData& model,
                                  const RationalPoint& E, const std::string& object, const CuspPrime& lambda) {
  for (const auto& o : model.overrides)
    if (o.object == object && o.lambda == lambda.id) return o.value;
  long q = lambda.over_prime;
  bool needs_flag = model.fibre(q) != nullptr || !problem.good_reduction_at(q);
  if (needs_flag && !contains(model.regular_at_cusps, q))
    fail(ErrorCode::NeedsOverride, "model is not flagged regular along the cusps over " + std::to_string(q) +
                                       "; supply i(" + object + ", " + lambda.id + ")");
  const Cusp& cusp = problem.cusp(lambda.cusp);
  const NumberField& k = cusp.field;
  auto v = [&](const mpq_class& c) -> mpq_class {
    if (c == 0) return mpq_class(1 << 20);
    return lambda_valuation(lambda, k, FieldElement::constant(k, c));
  };
  if (problem.family() == CurveFamily::SuperellipticCubic) {
    // E = (x : y : 1) and Q = (1 : u : 0) in P^2
    FieldElement d = FieldElement::constant(k, E.x) * cusp_slope(problem, cusp) - FieldElement::constant(k, E.y);
    mpq_class vd = d.is_zero() ? mpq_class(1 << 20) : lambda_valuation(lambda, k, d);
    mpq_class m = std::min({v(E.x), v(E.y), mpq_class(0)});
    return std::min(vd, mpq_class(0)) - m;
  }
  mpq_class vx = v(E.x);
  if (vx >= 0) return 0;
  if (!problem.even_degree())
    fail(ErrorCode::NeedsOverride, "contact with the point at infinity of an odd model needs an override");
  int g = problem.genus();
  mpq_class xg = 1;
  for (int i = 0; i <= g; ++i) xg *= E.x;
  mpq_class z = E.y / xg - cusp_slope(problem, cusp).coeffs()[0];
  return std::min(mpq_class(-vx), v(z));
}

mpq_class vertical_intersection(const RegularModelData& model, const CuspPrime& lambda,
                                const std::vector<mpq_class>& coefficients) {
  const Fibre* f = model.fibre(lambda.over_prime);
  if (!f) {
    if (coefficients.size() != 1) fail(ErrorCode::ShapeMismatch, "good fibre has one component");
    return coefficients[0] * lambda.e;
  }
  std::vector<mpq_class> inc;
  auto it = f->incidences.find(lambda.id);
  if (it != f->incidences.end()) {
    inc = it->second;
  } else if (f->components.size() == 1) {
    inc = {mpq_class(lambda.e)};
  } else {
    fail(ErrorCode::MissingIncidence, "no incidence for cusp prime '" + lambda.id + "'");
  }
  mpq_class total = 0;
  for (size_t i = 0; i < inc.size(); ++i) total += inc[i] * coefficients[i];
  return total;
}

std::string ReductionType::label() const {
  if (choices.empty()) return "trivial";
  std::ostringstream out;
  for (size_t i = 0; i < choices.size(); ++i) {
    if (i) out << ",";
    out << choices[i].prime << ":";
    if (choices[i].cuspidal()) {
      out << "cusp[" << choices[i].cusp_point << "]";
    } else {
      out << "C" << choices[i].component;
    }
  }
  return out.str();
}

std::vector<std::string> ReductionType::cuspidal_part() const {
  std::vector<std::string> out;
  for (const auto& c : choices)
    if (c.cuspidal()) out.push_back(c.cusp_point);
  return out;
}

std::vector<long> ReductionType::support() const {
  std::vector<long> out;
  for (const auto& c : choices)
    if (c.cuspidal()) out.push_back(c.prime);
  return out;
}

const ReductionChoice* ReductionType::choice(long q) const {
  for (const auto& c : choices)
    if (c.prime == q) return &c;
  return nullptr;
}

std::vector<ReductionType> enumerate_reduction_types(const CurveProblem& problem, const RegularModelData& model) {
  for (long q : problem.S())
    if (!contains(model.transversal, q))
      fail(ErrorCode::NotTransversal, "cusp closures are not flagged transversal over " + std::to_string(q));
  std::set<long> primes(problem.S().begin(), problem.S().end());
  for (const auto& f : model.fibres) primes.insert(f.prime);
  std::vector<std::vector<ReductionChoice>> options;
  for (long q : primes) {
    std::vector<ReductionChoice> opts;
    const Fibre* f = model.fibre(q);
    if (f) {
      for (size_t i = 0; i < f->components.size(); ++i)
        if (f->components[i].eligible) opts.push_back({q, static_cast<int>(i), ""});
    } else {
      opts.push_back({q, 0, ""});
    }
    if (contains(problem.S(), q)) {
      for (const auto& l : model.cusp_primes)
        if (l.over_prime == q && l.f == 1) opts.push_back({q, -1, l.id});
    }
    // a single forced component on an irreducible fibre is compressed out
    if (opts.size() == 1 && !opts[0].cuspidal() && !contains(problem.S(), q) && (!f || f->components.size() == 1))
      continue;
    if (opts.empty()) fail(ErrorCode::InvalidProblem, "no eligible reduction choice over " + std::to_string(q));
    options.push_back(opts);
  }
  std::vector<ReductionType> out(1);
  for (const auto& opts : options) {
    std::vector<ReductionType> next;
    for (const auto& t : out) {
      for (const auto& o : opts) {
        ReductionType u = t;
        u.choices.push_back(o);
        next.push_back(u);
      }
    }
    out = std::move(next);
  }
  return out;
}

bool SelmerTarget::b_is_zero() const {
  for (const auto& [id, v] : b)
    if (v != 0) return false;
  return true;
}

SelmerTarget selmer_target(const CurveProblem& problem, const RegularModelData& model, const ReductionType& sigma,
                           const std::string& base_object) {
  SelmerTarget out;
  for (const auto& lambda : model.cusp_primes) {
    mpq_class b = -horizontal_intersection(problem, model, problem.base_point(), base_object, lambda);
    const Fibre* f = model.fibre(lambda.over_prime);
    const ReductionChoice* c = sigma.choice(lambda.over_prime);
    if (f && f->components.size() > 1 && c) {
      int base_cpt = f->component_of(base_object);
      int target = c->cuspidal() ? f->component_of(c->cusp_point) : c->component;
      std::vector<mpq_class> inc(f->components.size(), 0);
      inc[target] += 1;
      inc[base_cpt] -= 1;
      CorrectionDivisor phi = correction_divisor(*f, inc, base_cpt);
      b += vertical_intersection(model, lambda, phi.coefficients);
    }
    out.b[lambda.id] = b;
  }
  for (const auto& c : sigma.choices) {
    if (!c.cuspidal()) continue;
    out.u.push_back({{c.cusp_point, mpq_class(1)}});
  }
  return out;
}

void check_generator_compatibility(const CurveProblem& problem, const RegularModelData& model, int precision) {
  std::set<std::pair<std::string, long>> groups;
  for (const auto& l : model.cusp_primes) groups.insert({l.cusp, l.over_prime});
  long p = problem.prime();
  for (const auto& [cusp_id, q] : groups) {
    const Cusp& cusp = problem.cusp(cusp_id);
    auto lambdas = model.primes_of(cusp_id, q);
    int covered = 0;
    mpq_class log_norm = 0;  // exponent of q in the norm of the product
    for (const auto* l : lambdas) {
      covered += l->e * l->f;
      mpq_class nv = rational_valuation(l->generator.base.norm(), q);
      log_norm += nv * l->generator.exponent * l->e;
    }
    if (covered != cusp.degree()) continue;  // only complete factorizations are checked
    if (log_norm != cusp.degree())
      fail(ErrorCode::InvalidProblem, "prime generators over " + std::to_string(q) + " for cusp " + cusp_id +
                                          " do not multiply to q");
    for (const auto* l : lambdas) {
      mpq_class n = l->generator.base.norm();
      mpz_class num = n.get_num(), den = n.get_den();
      mpz_class qq(q);
      mpz_remove(num.get_mpz_t(), num.get_mpz_t(), qq.get_mpz_t());
      mpz_remove(den.get_mpz_t(), den.get_mpz_t(), qq.get_mpz_t());
      if (abs(num) != 1 || den != 1)
        fail(ErrorCode::InvalidProblem, "generator of '" + l->id + "' has norm divisible by other primes");
    }
    for (const auto& phi : hensel_embed(cusp.field, p, precision)) {
      PadicNumber sum = PadicNumber::exact_zero(p);
      for (const auto* l : lambdas) sum += log_rational_power(l->generator, phi).scaled(mpz_class(l->e));
      PadicNumber lq = iwasawa_log(PadicNumber::integer(p, q, precision));
      if (sum != lq)
        fail(ErrorCode::InvalidProblem, "prime generators over " + std::to_string(q) + " fail the p-adic log check");
    }
  }
}

}  // namespace achab
