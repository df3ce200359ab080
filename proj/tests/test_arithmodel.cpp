#include <doctest.h>

#include "achab/arithmodel.hpp"
#include "support.hpp"

using namespace achab;
using namespace achab::testing;

namespace {

const ProblemFile& genus2() {
  static ProblemFile f = load_problem(fixture("genus2_split.json"));
  return f;
}

const ProblemFile& cubic() {
  static ProblemFile f = load_problem(fixture("superelliptic_a1.json"));
  return f;
}

Fibre two_component_fibre() {
  Fibre f;
  f.prime = 5;
  f.components = {{"C0"}, {"C1"}};
  f.intersection = RationalMatrix{{-1, 1}, {1, -1}};
  return f;
}

bool all_zero(const std::vector<mpq_class>& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace

TEST_SUITE("arithmodel") {

TEST_CASE("correction divisor on an irreducible fibre is zero") {
  Fibre f;
  f.prime = 3;
  f.components = {{"C0"}};
  f.intersection = RationalMatrix(1, 1);
  auto phi = correction_divisor(f, {0}, 0);
  CHECK(all_zero(phi.coefficients));
}

TEST_CASE("correction divisor on two components") {
  auto f = two_component_fibre();
  std::vector<mpq_class> inc{1, -1};
  auto phi = correction_divisor(f, inc, 0);
  CHECK(phi.coefficients[0] == 0);
  CHECK(abs(phi.coefficients[1] - phi.coefficients[0]) == 1);
  CHECK(all_zero(corrected_intersections(f, inc, phi)));
  CHECK_THROWS_AS(correction_divisor(f, {1}, 0), Error);
}

TEST_CASE("Psi meets every fixture component trivially") {
  const auto& model = genus2().inputs.model;
  for (const auto& fibre : model.fibres) {
    int n = static_cast<int>(fibre.components.size());
    for (const auto& [a, ia] : fibre.incidences)
      for (const auto& [b, ib] : fibre.incidences) {
        std::vector<mpq_class> inc(n);
        for (int i = 0; i < n; ++i) inc[i] = ia[i] - ib[i];
        for (int anchor = 0; anchor < n; ++anchor)
          CHECK(all_zero(corrected_intersections(fibre, inc, correction_divisor(fibre, inc, anchor))));
      }
  }
}

TEST_CASE("fibre relation is enforced") {
  RegularModelData m;
  Fibre f = two_component_fibre();
  f.intersection(0, 0) = -2;
  m.fibres.push_back(f);
  CHECK_THROWS_AS(m.validate(genus2().inputs.problem), Error);
  m.fibres[0] = two_component_fibre();
  CHECK_NOTHROW(m.validate(genus2().inputs.problem));
}

TEST_CASE("horizontal intersections on the cubic") {
  const auto& pr = cubic().inputs.problem;
  const auto& model = cubic().inputs.model;
  RationalPoint A{mpq_class(1, 18), mpq_class(7, 18)};
  for (const char* id : {"pi2", "pi3", "lambda2", "sqrt-3"}) {
    const auto& l = model.cusp_prime(id);
    mpq_class i = horizontal_intersection(pr, model, A, "A", l) - horizontal_intersection(pr, model, pr.base_point(), "P0", l);
    if (std::string(id) == "pi2") CHECK(i == 1);
    CHECK(i >= 0);
  }
  CHECK(horizontal_intersection(pr, model, pr.base_point(), "P0", model.cusp_prime("pi487")) == 0);
}

TEST_CASE("integral points do not meet the cusps of the genus 2 curve") {
  const auto& pr = genus2().inputs.problem;
  RegularModelData model = genus2().inputs.model;
  model.regular_at_cusps = {3, 5, 2027};
  for (long q : {3L, 5L, 2027L}) {
    for (const char* cusp : {"inf+", "inf-"}) {
      CuspPrime l{cusp, std::string("l") + std::to_string(q), q, 1, 1,
                  RationalPower{FieldElement::constant(pr.cusp(cusp).field, q), 1}, std::nullopt};
      for (const auto& k : genus2().inputs.known_points) CHECK(horizontal_intersection(pr, model, k.point, k.id, l) == 0);
    }
  }
}

TEST_CASE("unflagged contact needs an override") {
  const auto& pr = cubic().inputs.problem;
  RegularModelData model = cubic().inputs.model;
  model.regular_at_cusps.clear();
  RationalPoint A{mpq_class(1, 18), mpq_class(7, 18)};
  CHECK_THROWS_AS(horizontal_intersection(pr, model, A, "A", model.cusp_prime("pi3")), Error);
  model.overrides.push_back({"A", "pi3", 1});
  CHECK(horizontal_intersection(pr, model, A, "A", model.cusp_prime("pi3")) == 1);
}

TEST_CASE("reduction type counts") {
  auto t1 = enumerate_reduction_types(genus2().inputs.problem, genus2().inputs.model);
  CHECK(t1.size() == 4);
  auto t2 = enumerate_reduction_types(cubic().inputs.problem, cubic().inputs.model);
  CHECK(t2.size() == 4);
  bool found = false;
  for (const auto& t : t2) found = found || t.label() == "487:cusp[lambda487a]";
  CHECK(found);
}

TEST_CASE("good reduction everywhere gives one type") {
  auto pr = CurveProblem::hyperelliptic({4, -4, 0, 1}, RationalPoint{0, 2}, {}, 7, 12);
  auto types = enumerate_reduction_types(pr, RegularModelData{});
  REQUIRE(types.size() == 1);
  CHECK(types[0].choices.empty());
  auto target = selmer_target(pr, RegularModelData{}, types[0]);
  CHECK(target.b_is_zero());
  CHECK(target.u.empty());
}

TEST_CASE("S without transversality is refused") {
  RegularModelData model = cubic().inputs.model;
  model.transversal.clear();
  CHECK_THROWS_AS(enumerate_reduction_types(cubic().inputs.problem, model), Error);
}

TEST_CASE("Selmer target of the cuspidal type on the cubic") {
  const auto& pr = cubic().inputs.problem;
  const auto& model = cubic().inputs.model;
  for (const auto& t : enumerate_reduction_types(pr, model)) {
    auto target = selmer_target(pr, model, t);
    CHECK(target.b_is_zero());
    if (t.label() == "487:cusp[lambda487a]") {
      REQUIRE(target.u.size() == 1);
      CHECK(target.u[0].size() == 1);
      CHECK(target.u[0].at("lambda487a") == 1);
    }
  }
}

TEST_CASE("Selmer targets vanish on the genus 2 curve") {
  const auto& pr = genus2().inputs.problem;
  const auto& model = genus2().inputs.model;
  for (const auto& t : enumerate_reduction_types(pr, model)) {
    auto target = selmer_target(pr, model, t);
    CHECK(target.b_is_zero());
    CHECK(target.u.empty());
  }
}

TEST_CASE("prime generators are compatible") {
  CHECK_NOTHROW(check_generator_compatibility(cubic().inputs.problem, cubic().inputs.model, 12));
  RegularModelData broken = cubic().inputs.model;
  for (auto& l : broken.cusp_primes)
    if (l.id == "pi3") l.generator.base = FieldElement::constant(NumberField::rationals(), 9);
  CHECK_THROWS_AS(check_generator_compatibility(cubic().inputs.problem, broken, 12), Error);
}

TEST_CASE("lambda valuations of the split primes over 487") {
  const auto& model = cubic().inputs.model;
  const auto& field = cubic().inputs.problem.cusp("Q2").field;
  const auto& a = model.cusp_prime("lambda487a");
  const auto& b = model.cusp_prime("lambda487b");
  CHECK(lambda_valuation(a, field, a.generator.base) == 1);
  CHECK(lambda_valuation(b, field, a.generator.base) == 0);
  CHECK(lambda_valuation(a, field, FieldElement::constant(field, 487)) == 1);
}

}  // TEST_SUITE
