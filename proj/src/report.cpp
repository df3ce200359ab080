#include "achab/report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace achab {

using nlohmann::json;

namespace {

int certified_valuation(const PadicNumber& x) {
  if (x.is_exact_zero()) return PadicNumber::kInfinity;
  return x.is_zero() ? x.precision() : x.valuation();
}

json valuation_json(int v) { return v == PadicNumber::kInfinity ? json("inf") : json(v); }

std::string rational_text(const mpq_class& q) { return q.get_str(); }

std::string point_text(const PadicPoint& P, int digits) {
  return "(" + padic_digits(P.x, digits) + ", " + padic_digits(P.y, digits) + ")";
}

ProblemFile configured(const ProblemFile& file, const SolveOptions& options) {
  if (!options.p && !options.precision) return file;
  long p = options.p.value_or(file.inputs.problem.prime());
  int N = options.precision.value_or(file.inputs.problem.precision());
  try {
    return with_prime(file, p, N);
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << "p = " << p << " is not admissible (" << e.what() << "); admissible primes up to 50:";
    for (long q : admissible_primes(file)) msg << " " << q;
    fail(e.code(), msg.str());
  }
}

json matrix_json(const ChabautyMatrix& m, int digits) {
  json rows = json::array();
  for (int i = 0; i < m.matrix.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.matrix.cols(); ++j) row.push_back(padic_digits(m.matrix(i, j), digits));
    rows.push_back(row);
  }
  json corr = json::array();
  for (const auto& row : m.corrections) {
    json r = json::array();
    for (const auto& c : row) r.push_back(padic_digits(c, digits));
    corr.push_back(r);
  }
  return {{"rows", rows}, {"row_labels", m.row_labels}, {"r", m.r}, {"k", m.k}, {"s", m.s}, {"corrections", corr}};
}

json type_json(const TypeResult& t, int digits) {
  json out;
  out["label"] = t.sigma.label();
  out["condition"] = {{"lhs", t.condition.lhs}, {"rhs", t.condition.rhs}, {"holds", t.condition.holds}};
  json b = json::object();
  for (const auto& [id, v] : t.target.b) b[id] = rational_text(v);
  json u = json::array();
  for (const auto& m : t.target.u) {
    json e = json::object();
    for (const auto& [id, v] : m) e[id] = rational_text(v);
    u.push_back(e);
  }
  out["selmer"] = {{"b", b}, {"u", u}};
  if (t.matrix) out["matrix"] = matrix_json(*t.matrix, digits);
  if (t.annihilator) {
    json kernel = json::array();
    for (const auto& w : t.annihilator->forms) {
      json v = json::array();
      for (const auto& c : w.coefficients) v.push_back(padic_digits(c, digits));
      kernel.push_back(v);
    }
    out["kernel"] = kernel;
    out["kernel_loss"] = t.annihilator->loss;
  }
  json constants = json::array();
  for (const auto& c : t.constants) constants.push_back(padic_digits(c, digits));
  out["constants"] = constants;
  json discs = json::array();
  for (const auto& d : t.discs) {
    json jd = {{"disc", d.disc}, {"resolved", d.resolved}};
    if (!d.resolved) {
      jd["reason"] = d.reason;
    } else {
      jd["bound"] = d.bound;
      jd["series"] = d.series.to_string(std::min(digits, 6), 6);
      jd["series_precision"] = d.series.value_precision();
      json roots = json::array();
      for (const auto& r : d.points) {
        json jr = {{"t", padic_digits(r.t, digits)}, {"point", point_text(r.point, digits)}};
        jr["class"] = r.kind == CandidateClass::MatchedKnown ? "matched-known" : "extra";
        if (r.kind == CandidateClass::MatchedKnown) jr["known"] = r.known_id;
        roots.push_back(jr);
      }
      jd["roots"] = roots;
    }
    discs.push_back(jd);
  }
  out["discs"] = discs;
  out["complete"] = t.complete();
  return out;
}

}  // namespace

json error_record(const std::exception& e) {
  json out = {{"message", e.what()}};
  if (auto* err = dynamic_cast<const Error*>(&e)) out["code"] = std::string(error_name(err->code()));
  else out["code"] = "Internal";
  return out;
}

SolveOutcome run_solve(const ProblemFile& input, const SolveOptions& options) {
  SolveOutcome out;
  ProblemFile file = configured(input, options);
  const CurveProblem& pr = file.inputs.problem;
  ChabautyEngine engine(file.inputs, options.mode);
  if (!file.imported.empty()) engine.import_integrals(file.imported, file.name);
  auto types = engine.reduction_types();
  std::vector<int> indices;
  if (options.sigma) {
    if (*options.sigma < 0 || *options.sigma >= static_cast<int>(types.size()))
      fail(ErrorCode::InvalidProblem, "sigma index out of range (" + std::to_string(types.size()) + " types)");
    indices.push_back(*options.sigma);
  } else {
    for (size_t i = 0; i < types.size(); ++i) indices.push_back(static_cast<int>(i));
  }
  bool any_condition = false;
  for (const auto& t : types) any_condition = any_condition || engine.condition(t).holds;
  if (!any_condition) fail(ErrorCode::InvalidProblem, "the Chabauty condition fails for every reduction type");

  json report;
  report["schema"] = "affchab-report/1";
  report["problem"] = file.name;
  report["p"] = pr.prime();
  report["precision"] = pr.precision();
  report["genus"] = pr.genus();
  report["basis_size"] = pr.basis_size();
  report["rank"] = engine.rank();
  report["type_count"] = types.size();
  json jtypes = json::array();
  std::set<std::string> matched, extra, unresolved;
  bool error = false, partial = false;
  for (int idx : indices) {
    const auto& sigma = types[idx];
    try {
      ConditionCheck cond = engine.condition(sigma);
      if (!cond.holds) {
        partial = true;
        unresolved.insert(sigma.label() + "/condition");
        jtypes.push_back({{"index", idx}, {"label", sigma.label()}, {"complete", false},
                          {"condition", {{"lhs", cond.lhs}, {"rhs", cond.rhs}, {"holds", false}}}});
        continue;
      }
      TypeResult t = engine.solve_type(sigma);
      json jt = type_json(t, options.digits);
      jt["index"] = idx;
      jtypes.push_back(jt);
      for (const auto& d : t.discs) {
        if (!d.resolved) {
          partial = true;
          unresolved.insert(sigma.label() + "/" + d.disc);
        }
        for (const auto& r : d.points) {
          if (r.kind == CandidateClass::MatchedKnown) matched.insert(r.known_id);
          else extra.insert(point_text(r.point, 6));
        }
      }
      out.types.push_back(std::move(t));
    } catch (const std::exception& e) {
      error = true;
      jtypes.push_back({{"index", idx}, {"label", sigma.label()}, {"error", error_record(e)}});
    }
  }
  report["types"] = jtypes;
  out.candidates.matched.assign(matched.begin(), matched.end());
  out.candidates.extra.assign(extra.begin(), extra.end());
  out.candidates.unresolved.assign(unresolved.begin(), unresolved.end());
  report["candidates"] = {{"matched_known", out.candidates.matched},
                          {"extra_padic", out.candidates.extra},
                          {"unresolved", out.candidates.unresolved}};
  out.status = error ? RunStatus::Error : (partial ? RunStatus::Partial : RunStatus::Complete);
  report["status"] = out.status == RunStatus::Complete ? "complete" : (error ? "error" : "partial");
  out.report = report;

  std::ostringstream s;
  s << file.name << ": p = " << pr.prime() << ", N = " << pr.precision() << ", " << types.size()
    << " reduction types\n";
  for (const auto& t : out.types) {
    s << "  " << t.sigma.label() << ": kernel dim " << (t.annihilator ? t.annihilator->forms.size() : 0);
    int found = 0, open = 0;
    for (const auto& d : t.discs) {
      found += static_cast<int>(d.points.size());
      open += d.resolved ? 0 : 1;
    }
    s << ", " << found << " roots, " << open << " unresolved discs\n";
  }
  s << "matched known (" << matched.size() << "):";
  for (const auto& m : matched) s << " " << m;
  s << "\nextra p-adic (" << extra.size() << ")\nunresolved (" << unresolved.size() << ")";
  for (const auto& u : unresolved) s << " " << u;
  s << "\nstatus: " << report["status"].get<std::string>() << "\n";
  out.summary = s.str();
  return out;
}

VerifyOutcome run_verify(const ProblemFile& input, const SolveOptions& options, int max_loss) {
  VerifyOutcome out;
  ProblemFile file = configured(input, options);
  const CurveProblem& pr = file.inputs.problem;
  if (file.inputs.known_points.empty()) fail(ErrorCode::InvalidProblem, "verify needs a known-points list");
  ChabautyEngine engine(file.inputs, options.mode);
  if (!file.imported.empty()) engine.import_integrals(file.imported, file.name);
  int N = pr.precision();
  int threshold = N - max_loss;
  json points = json::array();
  std::map<std::string, std::vector<KnownPoint>> groups;
  bool partial = false;
  std::ostringstream s;
  s << "point            type                         min valuation  result\n";
  for (const auto& kp : file.inputs.known_points) {
    PointCheck c = engine.check_point(kp);
    json jp = {{"id", kp.id}, {"point", to_string(kp.point)}, {"resolved", c.resolved}};
    std::string result;
    if (!c.resolved) {
      partial = true;
      jp["reason"] = c.reason;
      result = "UNRESOLVED";
    } else {
      int v = c.min_valuation();
      jp["type"] = c.sigma.label();
      jp["valuation"] = valuation_json(v);
      bool ok = v >= threshold;
      jp["pass"] = ok;
      out.pass = out.pass && ok;
      result = ok ? "pass" : "FAIL";
      groups[engine.matrix_key(c.sigma)].push_back(kp);
    }
    points.push_back(jp);
    std::ostringstream line;
    line << kp.id;
    std::string row = line.str();
    row.resize(17, ' ');
    std::string type = c.resolved ? c.sigma.label() : "-";
    type.resize(29, ' ');
    std::string val = c.resolved ? (c.min_valuation() == PadicNumber::kInfinity ? "inf" : std::to_string(c.min_valuation())) : "-";
    val.resize(15, ' ');
    s << row << type << val << result << "\n";
  }
  int n = pr.basis_size();
  json dets = json::array();
  for (const auto& [key, pts] : groups) {
    if (static_cast<int>(pts.size()) < n) continue;
    // every n-subset, capped to keep the check quick
    std::vector<int> pick(n);
    for (int i = 0; i < n; ++i) pick[i] = i;
    int count = 0, worst = PadicNumber::kInfinity;
    const int cap = 500;
    while (count < cap) {
      std::vector<KnownPoint> subset;
      for (int i : pick) subset.push_back(pts[i]);
      worst = std::min(worst, certified_valuation(engine.determinant_criterion(subset)));
      ++count;
      int i = n - 1;
      while (i >= 0 && pick[i] == static_cast<int>(pts.size()) - n + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
    }
    bool ok = worst >= N - 2 * max_loss + 2;
    out.pass = out.pass && ok;
    dets.push_back({{"cuspidal_part", key}, {"subsets", count}, {"min_valuation", valuation_json(worst)}, {"pass", ok}});
    s << "determinants over " << count << " subsets (cuspidal part '" << key << "'): min valuation "
      << (worst == PadicNumber::kInfinity ? std::string("inf") : std::to_string(worst)) << (ok ? " pass" : " FAIL")
      << "\n";
  }
  out.report = {{"schema", "affchab-verify/1"}, {"problem", file.name}, {"p", pr.prime()}, {"precision", N},
                {"threshold", threshold}, {"points", points}, {"determinants", dets}, {"pass", out.pass}};
  out.status = partial ? RunStatus::Partial : RunStatus::Complete;
  s << (out.pass ? "all checks pass" : "some checks FAIL") << (partial ? " (some points unresolved)" : "") << "\n";
  out.summary = s.str();
  return out;
}

}  // namespace achab
