#include "achab/chabauty.hpp"

#include <algorithm>
#include <sstream>

namespace achab {

namespace {

int guard_digits() { return 4; }

// Incidence vector of a divisor on the fibre over q.
std::vector<mpq_class> divisor_incidence(const Fibre& fibre, const MordellWeilDivisor& G) {
  std::vector<mpq_class> inc(fibre.components.size(), 0);
  for (const auto& term : G.terms) {
    auto it = fibre.incidences.find(term.id);
    if (it != fibre.incidences.end()) {
      if (it->second.size() != inc.size()) fail(ErrorCode::ShapeMismatch, "incidence length for '" + term.id + "'");
      for (size_t i = 0; i < inc.size(); ++i) inc[i] += it->second[i] * term.multiplicity;
    } else {
      inc[fibre.component_of(term.id)] += term.multiplicity;
    }
  }
  return inc;
}

bool roughly_zero(const PadicNumber& v, int precision) { return v.is_zero() || v.valuation() >= precision; }

}  // namespace

ConditionCheck check_chabauty_condition(const CurveProblem& problem, int rank, int cuspidal_support) {
  ConditionCheck c;
  c.lhs = rank + cuspidal_support;
  c.rhs = problem.genus() + static_cast<int>(problem.cusps().size()) + problem.complex_cusp_places() - 1;
  c.holds = c.lhs < c.rhs;
  return c;
}

bool TypeResult::complete() const {
  return std::all_of(discs.begin(), discs.end(), [](const DiscLocus& d) { return d.resolved; });
}

ChabautyEngine::ChabautyEngine(ChabautyInputs inputs, Execution mode) : inputs_(std::move(inputs)), mode_(mode) {
  const CurveProblem& pr = inputs_.problem;
  pr.validate();
  inputs_.model.validate(pr);
  for (const auto& G : inputs_.generators) {
    int degree = 0;
    for (const auto& t : G.terms) {
      if (!pr.on_curve(t.point)) fail(ErrorCode::NotOnCurve, "generator term '" + t.id + "' is not on the curve");
      degree += t.multiplicity;
    }
    if (degree != 0) fail(ErrorCode::InvalidProblem, "generator '" + G.id + "' does not have degree zero");
  }
  int units_expected = pr.real_cusp_places() + pr.complex_cusp_places() - static_cast<int>(pr.cusps().size());
  if (static_cast<int>(inputs_.units.size()) != units_expected)
    fail(ErrorCode::InvalidProblem, "expected " + std::to_string(units_expected) + " unit generators, got " +
                                        std::to_string(inputs_.units.size()));
  integrator_ = std::make_shared<ColemanIntegrator>(pr, mode);
  long p = pr.prime();
  int N = pr.precision() + guard_digits();
  for (const auto& cusp : pr.cusps()) {
    CuspData d;
    d.id = cusp.id;
    d.embeddings = hensel_embed(cusp.field, p, N);
    if (static_cast<int>(d.embeddings.size()) != cusp.degree())
      fail(ErrorCode::InvalidProblem, "cusp field of '" + cusp.id + "' does not split at " + std::to_string(p));
    for (int j = 0; j < pr.basis_size(); ++j) {
      FieldElement res = residue_at_cusp(pr, j, cusp);
      std::vector<PadicNumber> row;
      for (const auto& phi : d.embeddings) row.push_back(phi.apply(res));
      d.residues.push_back(row);
    }
    cusps_.push_back(std::move(d));
  }
  for (const auto& lambda : inputs_.model.cusp_primes) {
    const CuspData& d = cusp_data(lambda.cusp);
    std::vector<PadicNumber> logs;
    for (const auto& phi : d.embeddings) logs.push_back(log_rational_power(lambda.generator, phi));
    log_pi_[lambda.id] = logs;
  }
}

const ChabautyEngine::CuspData& ChabautyEngine::cusp_data(const std::string& id) const {
  for (const auto& c : cusps_)
    if (c.id == id) return c;
  fail(ErrorCode::InvalidProblem, "unknown cusp '" + id + "'");
}

std::vector<PadicNumber> ChabautyEngine::embedded_residues(const CuspData& cusp, const LogDifferential& omega) const {
  long p = problem().prime();
  std::vector<PadicNumber> out(cusp.embeddings.size(), PadicNumber::exact_zero(p));
  for (size_t j = 0; j < omega.coefficients.size(); ++j) {
    if (omega.coefficients[j].is_exact_zero()) continue;
    for (size_t e = 0; e < out.size(); ++e) out[e] += omega.coefficients[j] * cusp.residues[j][e];
  }
  return out;
}

PadicNumber ChabautyEngine::weighted_log_sum(const LogDifferential& omega,
                                             const std::map<std::string, mpq_class>& weights) const {
  long p = problem().prime();
  PadicNumber total = PadicNumber::exact_zero(p);
  std::map<std::string, std::vector<PadicNumber>> residues;
  for (const auto& [id, w] : weights) {
    if (w == 0) continue;
    const CuspPrime& lambda = inputs_.model.cusp_prime(id);
    auto it = residues.find(lambda.cusp);
    if (it == residues.end()) it = residues.emplace(lambda.cusp, embedded_residues(cusp_data(lambda.cusp), omega)).first;
    const auto& logs = log_pi_.at(id);
    PadicNumber sum = PadicNumber::exact_zero(p);
    for (size_t e = 0; e < logs.size(); ++e) sum += it->second[e] * logs[e];
    total += sum.scaled(w);
  }
  return total;
}

void ChabautyEngine::import_integrals(std::vector<ImportedIntegral> table, const std::string& curve_id) {
  integrator_->import(std::move(table), curve_id);
  base_cache_.clear();
  matrix_cache_.clear();
  annihilator_cache_.clear();
}

std::vector<ReductionType> ChabautyEngine::reduction_types() const {
  return enumerate_reduction_types(problem(), inputs_.model);
}

ConditionCheck ChabautyEngine::condition(const ReductionType& sigma) const {
  return check_chabauty_condition(problem(), rank(), static_cast<int>(sigma.cuspidal_part().size()));
}

std::vector<PadicNumber> ChabautyEngine::base_integrals(const RationalPoint& P) const {
  std::string key = to_string(P);
  auto it = base_cache_.find(key);
  if (it != base_cache_.end()) return it->second;
  std::vector<PadicNumber> out;
  for (const auto& v : integrator_->from_base(P)) out.push_back(v.value);
  base_cache_[key] = out;
  return out;
}

std::vector<PadicNumber> ChabautyEngine::divisor_integrals(const MordellWeilDivisor& G) const {
  long p = problem().prime();
  std::vector<PadicNumber> out(problem().basis_size(), PadicNumber::exact_zero(p));
  for (const auto& term : G.terms) {
    auto b = base_integrals(term.point);
    for (size_t j = 0; j < out.size(); ++j) out[j] += b[j] * term.multiplicity;
  }
  return out;
}

mpq_class ChabautyEngine::psi_intersection(const MordellWeilDivisor& G, const CuspPrime& lambda,
                                           const mpq_class& fibre_shift) const {
  mpq_class total = 0;
  for (const auto& term : G.terms)
    total += horizontal_intersection(problem(), inputs_.model, term.point, term.id, lambda) * term.multiplicity;
  const Fibre* f = inputs_.model.fibre(lambda.over_prime);
  std::vector<mpq_class> phi;
  if (f && f->components.size() > 1) {
    int anchor = f->component_of(inputs_.base_id);
    phi = correction_divisor(*f, divisor_incidence(*f, G), anchor).coefficients;
  } else {
    phi.assign(f ? f->components.size() : 1, 0);
  }
  if (fibre_shift != 0) {
    std::vector<mpq_class> mult = f ? f->multiplicities() : std::vector<mpq_class>{1};
    for (size_t i = 0; i < phi.size(); ++i) phi[i] += fibre_shift * mult[i];
  }
  total += vertical_intersection(inputs_.model, lambda, phi);
  return total;
}

PadicNumber ChabautyEngine::correction(const MordellWeilDivisor& G, const LogDifferential& omega,
                                       const std::map<long, mpq_class>& fibre_shift) const {
  std::map<std::string, mpq_class> weights;
  for (const auto& lambda : inputs_.model.cusp_primes) {
    auto it = fibre_shift.find(lambda.over_prime);
    weights[lambda.id] = psi_intersection(G, lambda, it == fibre_shift.end() ? mpq_class(0) : it->second);
  }
  return weighted_log_sum(omega, weights);
}

PadicNumber ChabautyEngine::pairing_H(const MordellWeilDivisor& G, const LogDifferential& omega,
                                      const std::map<long, mpq_class>& fibre_shift) const {
  auto ints = divisor_integrals(G);
  long p = problem().prime();
  PadicNumber integral = PadicNumber::exact_zero(p);
  for (size_t j = 0; j < ints.size(); ++j)
    if (!omega.coefficients[j].is_exact_zero()) integral += omega.coefficients[j] * ints[j];
  return integral - correction(G, omega, fibre_shift);
}

ChabautyMatrix ChabautyEngine::assemble(const ReductionType& sigma) const {
  const CurveProblem& pr = problem();
  long p = pr.prime();
  int n = pr.basis_size();
  SelmerTarget target = selmer_target(pr, inputs_.model, sigma, inputs_.base_id);
  ChabautyMatrix m;
  m.r = rank();
  m.k = static_cast<int>(inputs_.units.size());
  m.s = static_cast<int>(target.u.size());
  m.matrix = PadicMatrix(m.r + m.k + m.s, n, p);
  auto basis = differential_basis(pr);
  int row = 0;
  for (const auto& G : inputs_.generators) {
    auto ints = divisor_integrals(G);
    std::vector<PadicNumber> corr;
    for (int j = 0; j < n; ++j) {
      corr.push_back(correction(G, basis[j]));
      m.matrix(row, j) = ints[j] - corr.back();
    }
    m.integrals.push_back(ints);
    m.corrections.push_back(corr);
    m.row_labels.push_back(G.id);
    ++row;
  }
  for (const auto& unit : inputs_.units) {
    for (int j = 0; j < n; ++j) {
      PadicNumber sum = PadicNumber::exact_zero(p);
      for (const auto& cd : cusps_) {
        auto it = unit.per_cusp.find(cd.id);
        if (it == unit.per_cusp.end()) continue;
        for (size_t e = 0; e < cd.embeddings.size(); ++e)
          sum += cd.residues[j][e] * iwasawa_log(cd.embeddings[e].apply(it->second));
      }
      m.matrix(row, j) = sum;
    }
    m.row_labels.push_back(unit.id);
    ++row;
  }
  for (const auto& u : target.u) {
    for (int j = 0; j < n; ++j) m.matrix(row, j) = weighted_log_sum(basis[j], u);
    std::string label = "D";
    for (const auto& [id, w] : u) label += ":" + id;
    m.row_labels.push_back(label);
    ++row;
  }
  return m;
}

Annihilator ChabautyEngine::annihilator(const ChabautyMatrix& m) const {
  Annihilator out;
  int n = problem().basis_size();
  std::vector<std::vector<PadicNumber>> vectors;
  if (m.matrix.rows() == 0) {
    long p = problem().prime();
    for (int i = 0; i < n; ++i) {
      std::vector<PadicNumber> v(n, PadicNumber::exact_zero(p));
      v[i] = PadicNumber::integer(p, 1, problem().precision());
      vectors.push_back(v);
    }
  } else {
    KernelBasis k = padic_kernel(m.matrix);
    out.loss = k.loss;
    vectors = k.vectors;
  }
  for (size_t i = 0; i < vectors.size(); ++i) {
    LogDifferential w;
    w.coefficients = normalize_kernel_vector(vectors[i]);
    w.label = "eta" + std::to_string(i + 1);
    out.forms.push_back(w);
  }
  return out;
}

PadicNumber ChabautyEngine::constant(const SelmerTarget& target, const LogDifferential& omega) const {
  return weighted_log_sum(omega, target.b);
}

TruncatedSeries ChabautyEngine::locus_series(const LogDifferential& omega, const PadicNumber& c,
                                             const ResidueDisc& disc) const {
  if (disc.kind == DiscKind::Cuspidal) fail(ErrorCode::PoleOnDisc, "cuspidal disc " + disc.label);
  if (disc.restricted) fail(ErrorCode::EndpointRestriction, "disc " + disc.label + " is not reachable");
  auto base = integrator_->from_base(disc.center);
  PadicNumber at_center = combine(omega, base, problem().precision()).value;
  TruncatedSeries F = formal_antiderivative(expand_differential_on_disc(problem(), omega, disc));
  std::vector<PadicNumber> coeffs = F.coefficients();
  if (coeffs.empty()) coeffs.push_back(PadicNumber::exact_zero(problem().prime()));
  coeffs[0] += at_center - c;
  return TruncatedSeries(F.prime(), coeffs, F.tail_valuation(), F.tail_slope());
}

DiscLocus ChabautyEngine::disc_locus(const std::vector<LogDifferential>& forms,
                                     const std::vector<PadicNumber>& constants, const ResidueDisc& disc) const {
  DiscLocus out;
  out.disc = disc.label;
  if (forms.empty()) {
    out.resolved = false;
    out.reason = "no annihilating differential";
    return out;
  }
  try {
    std::vector<TruncatedSeries> series;
    for (size_t i = 0; i < forms.size(); ++i) series.push_back(locus_series(forms[i], constants[i], disc));
    // isolate with the series of smallest Strassmann bound, filter with the others
    size_t lead = forms.size();
    int best = 0;
    for (size_t i = 0; i < series.size(); ++i) {
      int b;
      try {
        b = strassmann_bound(series[i]);
      } catch (const Error&) {
        continue;
      }
      if (lead == forms.size() || b < best) {
        lead = i;
        best = b;
      }
    }
    if (lead == forms.size()) fail(ErrorCode::IndistinguishableFromZero, "every locus series vanishes to precision");
    RootIsolation iso = strassmann_roots(series[lead]);
    out.series = series[lead];
    out.bound = iso.bound;
    const CurveProblem& pr = problem();
    std::vector<std::pair<std::string, PadicNumber>> known;
    for (const auto& kp : inputs_.known_points) {
      PadicPoint e = integrator_->embed(kp.point);
      if (e.infinite) continue;
      ResidueDisc d = disc_of(pr, e);
      if (!same_disc(d, disc)) continue;
      known.emplace_back(kp.id, disc_parameter(disc, e));
    }
    for (const auto& root : iso.roots) {
      bool common = true;
      for (size_t i = 0; i < series.size(); ++i) {
        if (i == lead) continue;
        PadicNumber v = series[i].evaluate(root.t);
        if (!roughly_zero(v, series[i].value_precision() - guard_digits())) common = false;
      }
      if (!common) continue;
      LocusPoint lp;
      lp.t = root.t;
      lp.point = point_at(disc, root.t);
      for (const auto& [id, t] : known) {
        if (compare(t, root.t) != Comparison::Distinct) {
          lp.kind = CandidateClass::MatchedKnown;
          lp.known_id = id;
          break;
        }
      }
      out.points.push_back(lp);
    }
  } catch (const Error& e) {
    out.resolved = false;
    out.reason = e.what();
    out.points.clear();
  }
  return out;
}

std::vector<DiscLocus> ChabautyEngine::locus(const std::vector<LogDifferential>& forms,
                                             const std::vector<PadicNumber>& constants, Execution mode) const {
  std::vector<ResidueDisc> all = residue_discs(problem());
  std::vector<ResidueDisc> discs;
  for (auto& d : all)
    if (d.kind != DiscKind::Cuspidal) discs.push_back(std::move(d));
  std::vector<DiscLocus> out(discs.size());
  const int count = static_cast<int>(discs.size());
  if (mode == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) out[i] = disc_locus(forms, constants, discs[i]);
  } else {
    for (int i = 0; i < count; ++i) out[i] = disc_locus(forms, constants, discs[i]);
  }
  return out;
}

ReductionType ChabautyEngine::type_of(const KnownPoint& P) const {
  const auto& model = inputs_.model;
  for (const auto& sigma : reduction_types()) {
    bool match = true;
    for (const auto& c : sigma.choices) {
      if (c.cuspidal()) {
        const CuspPrime& lambda = model.cusp_prime(c.cusp_point);
        if (horizontal_intersection(problem(), model, P.point, P.id, lambda) <= 0) match = false;
      } else {
        for (const auto& lambda : model.cusp_primes) {
          if (lambda.over_prime != c.prime) continue;
          if (horizontal_intersection(problem(), model, P.point, P.id, lambda) > 0) match = false;
        }
        if (!match) break;
        const Fibre* f = model.fibre(c.prime);
        int cpt = f ? f->component_of(P.id) : 0;
        if (cpt != c.component) match = false;
      }
      if (!match) break;
    }
    if (match) return sigma;
  }
  fail(ErrorCode::InvalidProblem, "point '" + P.id + "' has no admissible reduction type");
}

std::string ChabautyEngine::matrix_key(const ReductionType& sigma) const {
  auto part = sigma.cuspidal_part();
  std::sort(part.begin(), part.end());
  std::string key;
  for (const auto& id : part) key += id + ";";
  return key;
}

std::shared_ptr<const ChabautyMatrix> ChabautyEngine::cached_matrix(const ReductionType& sigma) const {
  std::string key = matrix_key(sigma);
  auto it = matrix_cache_.find(key);
  if (it != matrix_cache_.end()) return it->second;
  auto m = std::make_shared<const ChabautyMatrix>(assemble(sigma));
  matrix_cache_[key] = m;
  return m;
}

std::shared_ptr<const Annihilator> ChabautyEngine::cached_annihilator(const ReductionType& sigma) const {
  std::string key = matrix_key(sigma);
  auto it = annihilator_cache_.find(key);
  if (it != annihilator_cache_.end()) return it->second;
  auto a = std::make_shared<const Annihilator>(annihilator(*cached_matrix(sigma)));
  annihilator_cache_[key] = a;
  return a;
}

TypeResult ChabautyEngine::solve_type(const ReductionType& sigma) const {
  TypeResult out;
  out.sigma = sigma;
  out.condition = condition(sigma);
  out.target = selmer_target(problem(), inputs_.model, sigma, inputs_.base_id);
  out.matrix = cached_matrix(sigma);
  out.annihilator = cached_annihilator(sigma);
  for (const auto& w : out.annihilator->forms) out.constants.push_back(constant(out.target, w));
  out.discs = locus(out.annihilator->forms, out.constants, mode_);
  return out;
}

int PointCheck::min_valuation() const {
  int v = PadicNumber::kInfinity;
  for (const auto& x : values) v = std::min(v, x.is_zero() ? x.precision() : x.valuation());
  return v;
}

PointCheck ChabautyEngine::check_point(const KnownPoint& P) const {
  PointCheck out;
  out.id = P.id;
  try {
    out.sigma = type_of(P);
    auto ann = cached_annihilator(out.sigma);
    SelmerTarget target = selmer_target(problem(), inputs_.model, out.sigma, inputs_.base_id);
    auto ints = base_integrals(P.point);
    for (const auto& w : ann->forms) {
      PadicNumber v = PadicNumber::exact_zero(problem().prime());
      for (size_t j = 0; j < ints.size(); ++j)
        if (!w.coefficients[j].is_exact_zero()) v += w.coefficients[j] * ints[j];
      out.values.push_back(v - constant(target, w));
    }
  } catch (const Error& e) {
    out.resolved = false;
    out.reason = e.what();
    out.values.clear();
  }
  return out;
}

PadicMatrix ChabautyEngine::criterion_matrix(const std::vector<KnownPoint>& points) const {
  const CurveProblem& pr = problem();
  int n = pr.basis_size();
  if (static_cast<int>(points.size()) != n)
    fail(ErrorCode::ShapeMismatch, "the criterion needs " + std::to_string(n) + " points");
  auto basis = differential_basis(pr);
  PadicMatrix m(n, n, pr.prime());
  for (int i = 0; i < n; ++i) {
    auto ints = base_integrals(points[i].point);
    SelmerTarget target = selmer_target(pr, inputs_.model, type_of(points[i]), inputs_.base_id);
    for (int j = 0; j < n; ++j) m(i, j) = ints[j] - constant(target, basis[j]);
  }
  return m;
}

PadicNumber ChabautyEngine::determinant_criterion(const std::vector<KnownPoint>& points) const {
  return determinant(criterion_matrix(points));
}

}  // namespace achab
