#include <doctest.h>

#include "achab/qlinalg.hpp"
#include "support.hpp"

using namespace achab;
using namespace achab::testing;

namespace {

bool penrose(const RationalMatrix& m, const RationalMatrix& x) {
  RationalMatrix mx = m * x, xm = x * m;
  return mx * m == m && xm * x == x && mx.transpose() == mx && xm.transpose() == xm;
}

RationalMatrix random_symmetric_deficient(std::mt19937_64& rng, int n) {
  // B^T D B with B of rank < n
  int k = std::uniform_int_distribution<int>(0, n - 1)(rng);
  std::uniform_int_distribution<long> entry(-4, 4);
  RationalMatrix b(k, n), d(k, k);
  for (int i = 0; i < k; ++i) {
    d(i, i) = entry(rng) == 0 ? 1 : entry(rng);
    for (int j = 0; j < n; ++j) b(i, j) = entry(rng);
  }
  return b.transpose() * d * b;
}

}  // namespace

TEST_SUITE("qlinalg") {

TEST_CASE("pseudoinverse of small fibres") {
  RationalMatrix zero(1, 1);
  CHECK(moore_penrose(zero) == zero);
  CHECK(moore_penrose(RationalMatrix::identity(3)) == RationalMatrix::identity(3));
  RationalMatrix two{{-2, 2}, {2, -2}};
  RationalMatrix expected(2, 2);
  expected(0, 0) = mpq_class(-1, 8);
  expected(0, 1) = mpq_class(1, 8);
  expected(1, 0) = mpq_class(1, 8);
  expected(1, 1) = mpq_class(-1, 8);
  auto x = moore_penrose(two);
  CHECK(x == expected);
  CHECK(penrose(two, x));
}

TEST_CASE("pseudoinverse of the I4 cycle") {
  RationalMatrix cycle{{-2, 1, 0, 1}, {1, -2, 1, 0}, {0, 1, -2, 1}, {1, 0, 1, -2}};
  CHECK(cycle.rank() == 3);
  CHECK(penrose(cycle, moore_penrose(cycle)));
}

TEST_CASE("Penrose identities on random rank-deficient symmetric matrices") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 40; ++i) {
    int n = 1 + i % 5;
    auto m = random_symmetric_deficient(rng, n);
    CHECK(m.rank() < n);
    CHECK(penrose(m, moore_penrose(m)));
  }
}

TEST_CASE("non-symmetric input is refused") {
  RationalMatrix m{{1, 2}, {3, 4}};
  CHECK_THROWS_AS(moore_penrose(m), Error);
  CHECK(penrose(m, pseudo_inverse(m)));
}

TEST_CASE("kernel of the zero matrix is the standard basis") {
  PadicMatrix z(2, 3, 7);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) z(i, j) = PadicNumber::zero(7, 10);
  auto k = padic_kernel(z);
  REQUIRE(k.vectors.size() == 3);
  CHECK(k.rank == 0);
  for (int v = 0; v < 3; ++v)
    for (int j = 0; j < 3; ++j) CHECK(agrees(k.vectors[v][j], PadicNumber::integer(7, v == j ? 1 : 0, 10), 10));
}

TEST_CASE("kernel of the displayed 2 x 3 superelliptic matrix") {
  const char* rows[2][3] = {{"2*7 + 5*7^2 + 4*7^4 + 5*7^5 + O(7^6)", "6*7 + 7^2 + 3*7^4 + O(7^6)",
                             "2*7 + 6*7^2 + 2*7^3 + O(7^6)"},
                            {"O(7^6)", "6*7^2 + 2*7^3 + 6*7^4 + O(7^6)", "7 + 4*7^2 + 7^3 + 5*7^4 + 4*7^5 + O(7^6)"}};
  PadicMatrix m(2, 3, 7);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = PadicNumber::parse(rows[i][j], 7);
  m(1, 0) = PadicNumber::exact_zero(7);
  auto k = padic_kernel(m);
  REQUIRE(k.vectors.size() == 1);
  const auto& v = k.vectors[0];
  // entries of a kernel vector lose a digit to the leading valuation of the matrix
  CHECK(agrees(v[0], PadicNumber::integer(7, 1, 5), 5));
  CHECK(agrees(v[1], "2 + 6*7 + 2*7^2 + 3*7^3 + 4*7^5", 4));
  CHECK(agrees(v[2], "2*7 + 6*7^2 + 2*7^5", 4));
  for (const auto& e : m.apply(v)) CHECK(certified(e) >= 6 - k.loss);
}

TEST_CASE("p-adic kernel matches the exact rational kernel") {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<long> entry(-20, 20);
  for (int t = 0; t < 20; ++t) {
    RationalMatrix m(2, 3);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = entry(rng);
    if (m.rank() != 2) continue;
    auto exact = rational_kernel(m);
    REQUIRE(exact.size() == 1);
    std::vector<PadicNumber> ev;
    for (const auto& q : exact[0]) ev.push_back(PadicNumber::rational(7, q, 40));
    ev = normalize_kernel_vector(ev);
    auto k = padic_kernel(to_padic(m, 7, 14));
    REQUIRE(k.vectors.size() == 1);
    for (int j = 0; j < 3; ++j) CHECK(agrees(k.vectors[0][j], ev[j], 14 - k.loss - 2));
  }
}

TEST_CASE("kernel vectors are normalized and certified") {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 20; ++t) {
    PadicMatrix m(2, 4, 7);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 4; ++j) m(i, j) = random_integer(rng, 7, 12);
    auto k = padic_kernel(m);
    CHECK(static_cast<int>(k.vectors.size()) == 4 - k.rank);
    for (const auto& v : k.vectors) {
      int vmin = PadicNumber::kInfinity, first = -1;
      for (int j = 0; j < 4; ++j) {
        int c = certified(v[j]);
        if (c < vmin) vmin = c, first = j;
      }
      REQUIRE(first >= 0);
      CHECK(agrees(v[first], PadicNumber::integer(7, 1, 12), 12 - k.loss - 2));
      for (const auto& e : m.apply(v)) CHECK(certified(e) >= 12 - k.loss);
    }
  }
}

TEST_CASE("determinant and solve") {
  RationalMatrix a{{2, 1}, {7, 4}};
  auto pa = to_padic(a, 7, 10);
  CHECK(agrees(determinant(pa), PadicNumber::integer(7, 1, 10), 10));
  auto x = solve(pa, {PadicNumber::integer(7, 3, 10), PadicNumber::integer(7, 11, 10)});
  CHECK(agrees(x[0], PadicNumber::integer(7, 1, 10), 10));
  CHECK(agrees(x[1], PadicNumber::integer(7, 1, 10), 10));
}

}  // TEST_SUITE
