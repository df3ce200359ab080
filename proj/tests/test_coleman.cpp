#include <doctest.h>

#include "achab/coleman.hpp"
#include "divisors.hpp"

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

const ColemanIntegrator& genus2_integrator() {
  static ColemanIntegrator c(genus2().inputs.problem);
  return c;
}

const ColemanIntegrator& cubic_integrator() {
  static ColemanIntegrator c(cubic().inputs.problem);
  return c;
}

// Point of the disc of (-1, 1) with parameter t.
PadicPoint genus2_disc_point(long t, int N) {
  const auto& pr = genus2().inputs.problem;
  auto d = make_disc(pr, 6, 1, 2 * N);
  return point_at(d, PadicNumber::integer(7, t, N));
}

LogDifferential combination(std::mt19937_64& rng, const CurveProblem& pr, bool holomorphic_only) {
  LogDifferential w;
  for (int j = 0; j < pr.basis_size(); ++j) {
    bool keep = !holomorphic_only || j < pr.genus();
    w.coefficients.push_back(keep ? random_integer(rng, pr.prime(), pr.precision() + 4)
                                  : PadicNumber::exact_zero(pr.prime()));
  }
  w.holomorphic = holomorphic_only;
  return w;
}

}  // namespace

TEST_SUITE("coleman") {

TEST_CASE("tiny integral from a point to itself vanishes") {
  const auto& pr = genus2().inputs.problem;
  auto P = genus2_disc_point(3, 22);
  for (const auto& w : differential_basis(pr)) CHECK(certified(tiny_integral(pr, w, P, P).value) >= 12);
}

TEST_CASE("tiny integrals are antisymmetric") {
  const auto& pr = genus2().inputs.problem;
  for (long s = 0; s < 5; ++s) {
    auto P = genus2_disc_point(s * 11 + 2, 22), Q = genus2_disc_point(s * 5 - 9, 22);
    auto pq = tiny_integrals(pr, P, Q), qp = tiny_integrals(pr, Q, P);
    for (size_t j = 0; j < pq.size(); ++j) CHECK(certified(pq[j] + qp[j]) >= 12);
  }
}

TEST_CASE("tiny integrals refuse points of different discs") {
  const auto& pr = genus2().inputs.problem;
  auto P = to_padic(RationalPoint{-1, 1}, 7, 22), Q = to_padic(RationalPoint{0, 3}, 7, 22);
  CHECK_THROWS_AS(tiny_integrals(pr, P, Q), Error);
}

TEST_CASE("integral of the first holomorphic form from P0 to A on the cubic") {
  auto v = cubic_integrator().from_base(RationalPoint{mpq_class(1, 18), mpq_class(7, 18)});
  CHECK(agrees(v[0].value, "2*7 + 5*7^2 + 4*7^4 + 5*7^5", 6));
}

TEST_CASE("Frobenius integrals agree with tiny integrals inside one disc") {
  const auto& pr = genus2().inputs.problem;
  const auto& integ = genus2_integrator();
  HyperellipticCurve probe = HyperellipticCurve::from_integers(pr.f(), 7, 1);
  auto curve = HyperellipticCurve::from_integers(pr.f(), 7, frobenius_input_precision(probe, 14));
  auto P = genus2_disc_point(4, 22), Q = genus2_disc_point(-13, 22);
  auto global = coleman_integrals_on_basis(curve, *integ.frobenius(), P, Q, 14);
  auto tiny = tiny_integrals(pr, P, Q);
  for (int j = 0; j < pr.basis_size(); ++j) CHECK(agrees(global[j], tiny[j], 10));
}

TEST_CASE("integrals are additive along a chain of points") {
  const auto& integ = genus2_integrator();
  const auto& pts = genus2().inputs.known_points;
  for (size_t i = 0; i + 2 < pts.size(); i += 2) {
    auto a = integ.basis_integrals(pts[i].point, pts[i + 1].point);
    auto b = integ.basis_integrals(pts[i + 1].point, pts[i + 2].point);
    auto c = integ.basis_integrals(pts[i].point, pts[i + 2].point);
    for (size_t j = 0; j < a.size(); ++j) CHECK(agrees(a[j].value + b[j].value, c[j].value, 10));
  }
}

TEST_CASE("holomorphic forms integrate to zero over principal divisors") {
  std::mt19937_64 rng(61);
  const auto& integ = genus2_integrator();
  const auto& pr = integ.problem();
  int done = 0;
  for (int attempt = 0; attempt < 400 && done < 4; ++attempt) {
    auto div = random_even_principal(rng, pr, 22);
    if (!div) continue;
    ++done;
    auto w = combination(rng, pr, true);
    auto check = residue_theorem_check(integ, *div, w);
    CHECK(certified(check.rhs) >= 12);
    CHECK(certified(check.lhs) >= 9);
  }
  CHECK(done == 4);
}

TEST_CASE("residue theorem on the genus 2 curve") {
  std::mt19937_64 rng(67);
  const auto& integ = genus2_integrator();
  const auto& pr = integ.problem();
  int done = 0;
  for (int attempt = 0; attempt < 400 && done < 4; ++attempt) {
    auto div = random_even_principal(rng, pr, 22);
    if (!div) continue;
    ++done;
    auto w = combination(rng, pr, false);
    auto check = residue_theorem_check(integ, *div, w);
    CHECK(certified(check.lhs - check.rhs) >= 9);
    // scaling the function by p changes neither side
    PrincipalDivisor scaled = *div;
    for (auto& v : scaled.cusp_values) v *= PadicNumber::integer(7, 7, 30);
    auto again = residue_theorem_check(integ, scaled, w);
    CHECK(agrees(again.rhs, check.rhs, 11));
  }
  CHECK(done == 4);
}

TEST_CASE("residue theorem on the cubic curve") {
  std::mt19937_64 rng(71);
  const auto& integ = cubic_integrator();
  const auto& pr = integ.problem();
  int done = 0;
  for (int attempt = 0; attempt < 400 && done < 3; ++attempt) {
    auto div = random_cubic_principal(rng, integ, 22);
    if (!div) continue;
    ++done;
    auto w = combination(rng, pr, false);
    auto check = residue_theorem_check(integ, *div, w);
    CHECK(certified(check.lhs - check.rhs) >= 9);
  }
  CHECK(done == 3);
}

TEST_CASE("point counts from the Frobenius trace") {
  const auto& pr = genus2().inputs.problem;
  const auto& integ = genus2_integrator();
  HyperellipticCurve curve = HyperellipticCurve::from_integers(pr.f(), 7, 20);
  CHECK(count_points_from_frobenius(curve, *integ.frobenius()) == count_points(curve));

  HyperellipticCurve e = HyperellipticCurve::from_integers({1, 1, 0, 1}, 7, 30);
  auto data = frobenius_matrix(e, 8);
  long n = count_points(e);
  CHECK(count_points_from_frobenius(e, data) == n);
  // a_p = p + 1 - #E(F_p)
  CHECK(agrees(data.trace(), PadicNumber::integer(7, 7 + 1 - n, 8), 6));
  CHECK(agrees(determinant(data.matrix), PadicNumber::integer(7, 7, 8), 6));
}

TEST_CASE("Frobenius determinant on a genus 2 odd model") {
  HyperellipticCurve c = HyperellipticCurve::from_integers({1, 3, 0, 2, 0, 1}, 11, 30);
  auto data = frobenius_matrix(c, 8, Execution::Serial);
  CHECK(agrees(determinant(data.matrix), PadicNumber::integer(11, 121, 8), 6));
  CHECK(count_points_from_frobenius(c, data) == count_points(c));
}

TEST_CASE("serial and parallel Frobenius agree") {
  HyperellipticCurve probe = HyperellipticCurve::from_integers({3, 1, 0, 0, 0, 1}, 7, 1);
  HyperellipticCurve c = HyperellipticCurve::from_integers({3, 1, 0, 0, 0, 1}, 7, frobenius_input_precision(probe, 8));
  auto a = frobenius_matrix(c, 8, Execution::Serial);
  auto b = frobenius_matrix(c, 8, Execution::Parallel);
  for (int i = 0; i < a.matrix.rows(); ++i)
    for (int j = 0; j < a.matrix.cols(); ++j) CHECK(agrees(a.matrix(i, j), b.matrix(i, j), 8));
}

TEST_CASE("bad reduction is refused") {
  try {
    HyperellipticCurve::from_integers({1, 3, 0, 2, 0, 1}, 7, 10);
    FAIL("accepted a curve with a repeated root mod 7");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadReduction);
  }
}

TEST_CASE("points not on the curve are rejected") {
  auto P = to_padic(RationalPoint{-1, 2}, 7, 22);
  CHECK_THROWS_AS(genus2_integrator().from_base(P), Error);
}

TEST_CASE("cusp-adjacent endpoints are refused on the cubic") {
  CHECK_THROWS_AS(cubic_integrator().from_base(RationalPoint{-1, -1}), Error);
}

}  // TEST_SUITE
