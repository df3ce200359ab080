#include "achab/problem.hpp"

#include <fstream>
#include <set>

namespace achab {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    fail(ErrorCode::ParseError, where + " is missing '" + key + "'");
  return obj.at(key);
}

// First present key among a name and its alias.
const json& require_either(const json& obj, const char* key, const char* alias, const std::string& where) {
  if (obj.is_object() && obj.contains(key)) return obj.at(key);
  if (obj.is_object() && obj.contains(alias)) return obj.at(alias);
  fail(ErrorCode::ParseError, where + " is missing '" + key + "'");
}

std::string text_of(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  fail(ErrorCode::ParseError, "expected a rational as string or integer, got " + v.dump());
}

mpq_class rational_of(const json& v) { return parse_rational(text_of(v)); }

RationalPoint point_of(const json& v, const std::string& where) {
  return RationalPoint{rational_of(require(v, "x", where)), rational_of(require(v, "y", where))};
}

FieldElement element_of(const json& v, const NumberField& field) {
  RationalPoly c;
  if (v.is_array()) {
    for (const auto& e : v) c.push_back(rational_of(e));
  } else {
    c.push_back(rational_of(v));
  }
  return FieldElement(field, c);
}

std::vector<mpq_class> rationals_of(const json& v) {
  std::vector<mpq_class> out;
  for (const auto& e : v) out.push_back(rational_of(e));
  return out;
}

Fibre fibre_of(const json& v) {
  Fibre f;
  f.prime = require(v, "prime", "fibre").get<long>();
  std::string where = "fibre over " + std::to_string(f.prime);
  for (const auto& c : require(v, "components", where)) {
    Component comp;
    comp.id = require(c, "id", where).get<std::string>();
    comp.multiplicity = c.value("multiplicity", 1);
    comp.eligible = c.value("eligible", true);
    f.components.push_back(comp);
  }
  int n = static_cast<int>(f.components.size());
  if (v.contains("intersection_matrix") || v.contains("intersection")) {
    const auto& rows = require_either(v, "intersection_matrix", "intersection", where);
    if (static_cast<int>(rows.size()) != n) fail(ErrorCode::ShapeMismatch, where + ": intersection matrix rows");
    f.intersection = RationalMatrix(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n) fail(ErrorCode::ShapeMismatch, where + ": intersection matrix cols");
      for (int j = 0; j < n; ++j) f.intersection(i, j) = rational_of(rows[i][j]);
    }
  } else if (n == 1) {
    f.intersection = RationalMatrix(1, 1);
  } else {
    fail(ErrorCode::ParseError, where + " needs an intersection matrix");
  }
  if (v.contains("incidences"))
    for (const auto& [id, inc] : v.at("incidences").items()) f.incidences[id] = rationals_of(inc);
  return f;
}

CurveProblem curve_of(const json& doc) {
  const json& curve = require(doc, "curve", "problem");
  const json& arith = require(doc, "arithmetic", "problem");
  std::string family = require(curve, "family", "curve").get<std::string>();
  RationalPoint base = point_of(require(curve, "base_point", "curve"), "base point");
  std::vector<long> S = arith.value("S", std::vector<long>{});
  long p = require(arith, "p", "arithmetic").get<long>();
  int precision = arith.value("precision", 12);
  if (family == "hyperelliptic") {
    std::vector<mpz_class> f;
    for (const auto& c : require(curve, "f", "curve")) f.emplace_back(text_of(c));
    return CurveProblem::hyperelliptic(f, base, S, p, precision);
  }
  if (family == "superelliptic") return CurveProblem::superelliptic(require(curve, "a", "curve").get<long>(), base, S, p, precision);
  fail(ErrorCode::UnsupportedFamily, "unknown curve family '" + family + "'");
}

}  // namespace

ProblemFile parse_problem(const json& doc) {
  std::string schema = require(doc, "schema", "problem").get<std::string>();
  if (schema != kProblemSchema) fail(ErrorCode::ParseError, "unsupported schema '" + schema + "'");
  ProblemFile out;
  out.name = doc.value("name", std::string("problem"));
  ChabautyInputs& in = out.inputs;
  in.problem = curve_of(doc);
  const CurveProblem& pr = in.problem;
  in.base_id = doc.at("curve").at("base_point").value("id", std::string("P0"));

  if (doc.contains("model")) {
    const json& m = doc.at("model");
    for (const auto& f : m.value("fibres", json::array())) in.model.fibres.push_back(fibre_of(f));
    for (const auto& l : m.value("cusp_primes", json::array())) {
      CuspPrime c;
      c.cusp = require(l, "cusp", "cusp prime").get<std::string>();
      c.id = require_either(l, "lambda_id", "id", "cusp prime").get<std::string>();
      c.over_prime = require_either(l, "over_prime", "over", "cusp prime '" + c.id + "'").get<long>();
      c.e = l.value("e", 1);
      c.f = l.value("f", 1);
      const NumberField& field = pr.cusp(c.cusp).field;
      const json& g = require(l, "generator", "cusp prime '" + c.id + "'");
      if (g.is_object()) {
        c.generator.base = element_of(require(g, "base", "generator"), field);
        if (g.contains("exponent")) c.generator.exponent = rational_of(g.at("exponent"));
      } else {
        c.generator.base = element_of(g, field);
      }
      if (l.contains("root_mod") && !l.at("root_mod").is_null()) c.root_mod = l.at("root_mod").get<long>();
      in.model.cusp_primes.push_back(c);
    }
    for (const auto& o : m.value("overrides", json::array()))
      in.model.overrides.push_back({require(o, "object", "override").get<std::string>(),
                                    require(o, "lambda", "override").get<std::string>(),
                                    rational_of(require(o, "value", "override"))});
    in.model.regular_at_cusps = m.value("regular_at_cusps", std::vector<long>{});
    in.model.transversal = m.value("transversal", std::vector<long>{});
  }

  std::set<std::string> ids{in.base_id};
  for (const auto& g : doc.value("generators", json::array())) {
    MordellWeilDivisor G;
    G.id = require(g, "id", "generator").get<std::string>();
    for (const auto& t : require(g, "terms", "generator '" + G.id + "'")) {
      DivisorTerm term;
      term.id = require(t, "id", "divisor term").get<std::string>();
      term.point = point_of(t, "divisor term '" + term.id + "'");
      term.multiplicity = t.value("multiplicity", 1);
      G.terms.push_back(term);
      ids.insert(term.id);
    }
    in.generators.push_back(G);
  }
  for (const auto& u : doc.value("units", json::array())) {
    UnitGenerator e;
    e.id = require(u, "id", "unit").get<std::string>();
    for (const auto& [cusp, value] : require(u, "per_cusp", "unit '" + e.id + "'").items())
      e.per_cusp[cusp] = element_of(value, pr.cusp(cusp).field);
    in.units.push_back(e);
  }
  for (const auto& k : doc.value("known_points", json::array())) {
    KnownPoint kp{require(k, "id", "known point").get<std::string>(), point_of(k, "known point")};
    if (!pr.on_curve(kp.point))
      fail(ErrorCode::NotOnCurve, "known point '" + kp.id + "' " + to_string(kp.point) + " is not on the curve");
    in.known_points.push_back(kp);
    ids.insert(kp.id);
  }
  for (const auto& f : in.model.fibres)
    for (const auto& [id, inc] : f.incidences) {
      bool lambda = false;
      for (const auto& l : in.model.cusp_primes) lambda = lambda || l.id == id;
      if (!lambda && !ids.count(id))
        fail(ErrorCode::InvalidProblem, "incidence over " + std::to_string(f.prime) + " names unknown object '" + id + "'");
    }

  if (doc.contains("imported_integrals")) {
    const json& imp = doc.at("imported_integrals");
    out.imported_prime = require(imp, "p", "imported integrals").get<long>();
    for (const auto& e : require(imp, "values", "imported integrals")) {
      ImportedIntegral v;
      v.curve_id = out.name;
      v.differential = require(e, "differential", "imported integral").get<int>();
      v.from = point_of(require(e, "from", "imported integral"), "imported integral");
      v.to = point_of(require(e, "to", "imported integral"), "imported integral");
      v.value = PadicNumber::parse(text_of(require(e, "value", "imported integral")), out.imported_prime,
                                   pr.precision());
      out.imported.push_back(v);
    }
  }
  in.model.validate(pr);
  return out;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream file(path);
  if (!file) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(file);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, path + ": " + e.what());
  }
  try {
    return parse_problem(doc);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, path + ": " + e.what());
  }
}

ProblemFile with_prime(const ProblemFile& file, long p, int precision) {
  ProblemFile out = file;
  out.inputs.problem = file.inputs.problem.with_prime(p, precision);
  if (p != file.imported_prime) out.imported.clear();
  return out;
}

std::vector<long> admissible_primes(const ProblemFile& file, long limit) {
  std::vector<long> out;
  for (long q = 3; q <= limit; q += 2) {
    if (!mpz_probab_prime_p(mpz_class(q).get_mpz_t(), 30)) continue;
    try {
      CurveProblem pr = file.inputs.problem.with_prime(q, 4);
      for (const auto& cusp : pr.cusps())
        if (static_cast<int>(hensel_embed(cusp.field, q, 4).size()) != cusp.degree())
          fail(ErrorCode::InvalidProblem, "cusp field does not split");
      out.push_back(q);
    } catch (const Error&) {
    }
  }
  return out;
}

std::string padic_digits(const PadicNumber& x, int digits) {
  if (digits < 0 || x.is_exact_zero()) return x.to_string();
  return x.truncated(digits).to_string();
}

}  // namespace achab
