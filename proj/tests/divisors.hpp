#pragma once

#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "achab/coleman.hpp"
#include "achab/frobenius.hpp"
#include "support.hpp"

namespace achab::testing {

using Poly = std::vector<PadicNumber>;

inline PadicNumber eval(const Poly& c, const PadicNumber& x) {
  PadicNumber acc = PadicNumber::exact_zero(x.prime());
  for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  long p = a.front().prime();
  Poly out(a.size() + b.size() - 1, PadicNumber::exact_zero(p));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline Poly poly_sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), PadicNumber::exact_zero(b.front().prime()));
  for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  return a;
}

// Quotient by (x - r), remainder dropped.
inline Poly divide_linear(const Poly& a, const PadicNumber& r) {
  Poly q(a.size() - 1, PadicNumber::exact_zero(r.prime()));
  PadicNumber carry = PadicNumber::exact_zero(r.prime());
  for (size_t i = a.size(); i-- > 1;) {
    carry = a[i] + carry * r;
    q[i - 1] = carry;
  }
  return q;
}

// Lagrange interpolation through (x_i, v_i) with x_i distinct mod p.
inline Poly interpolate(const std::vector<PadicNumber>& xs, const std::vector<PadicNumber>& vs) {
  long p = xs.front().prime();
  int N = xs.front().precision();
  Poly out(xs.size(), PadicNumber::exact_zero(p));
  for (size_t i = 0; i < xs.size(); ++i) {
    Poly basis{PadicNumber::integer(p, 1, N)};
    PadicNumber denom = PadicNumber::integer(p, 1, N);
    for (size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      basis = poly_mul(basis, Poly{-xs[j], PadicNumber::integer(p, 1, N)});
      denom *= xs[i] - xs[j];
    }
    PadicNumber scale = vs[i] / denom;
    for (size_t k = 0; k < basis.size(); ++k) out[k] += basis[k] * scale;
  }
  return out;
}

// Roots of a polynomial of degree <= 2 with unit discriminant and leading coefficient.
inline std::optional<std::vector<PadicNumber>> small_roots(const Poly& q) {
  if (q.size() == 1) return std::vector<PadicNumber>{};
  if (!q.back().is_unit()) return std::nullopt;
  if (q.size() == 2) return std::vector<PadicNumber>{-q[0] / q[1]};
  if (q.size() != 3) return std::nullopt;
  PadicNumber disc = q[1] * q[1] - 4 * q[0] * q[2];
  if (!disc.is_unit()) return std::nullopt;
  try {
    PadicNumber s = padic_sqrt(disc);
    PadicNumber two_a = 2 * q[2];
    return std::vector<PadicNumber>{(-q[1] + s) / two_a, (-q[1] - s) / two_a};
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Random point with integral x and unit y on y^2 = f(x), x avoiding the residues of `avoid`.
inline std::optional<PadicPoint> random_square_point(std::mt19937_64& rng, const Poly& f, int N,
                                                     const std::vector<PadicNumber>& avoid = {}) {
  long p = f.front().prime();
  for (int attempt = 0; attempt < 40; ++attempt) {
    PadicNumber x = random_integer(rng, p, N);
    bool clash = false;
    for (const auto& a : avoid) clash = clash || !(x - a).is_unit();
    if (clash) continue;
    PadicNumber fx = eval(f, x);
    if (!fx.is_unit()) continue;
    try {
      PadicNumber y = padic_sqrt(fx);
      if (rng() % 2) y = -y;
      return PadicPoint{x, y, false};
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

struct HyperellipticFunction {
  // y + c(x), divided by (x - x1)^(g+1) for even degree
  std::vector<std::pair<PadicPoint, int>> divisor;
  Poly c;
  std::optional<PadicPoint> pole;
};

inline bool distinct_mod_p(const std::vector<PadicNumber>& xs) {
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = i + 1; j < xs.size(); ++j)
      if (!(xs[i] - xs[j]).is_unit()) return false;
  return true;
}

// A function F = y + c(x) (odd degree) or (y + c(x)) / (x - x1)^(g+1) (even degree) with its divisor.
// Zeros: g+2 (even) or g+1 (odd) random points through which c is interpolated, plus the remaining roots of c^2 - f.
inline std::optional<HyperellipticFunction> random_hyperelliptic_function(std::mt19937_64& rng, const Poly& f,
                                                                         int genus, int N) {
  long p = f.front().prime();
  int degree = static_cast<int>(f.size()) - 1;
  bool even = degree % 2 == 0;
  int k = even ? genus + 2 : genus + 1;
  std::vector<PadicNumber> xs, vs;
  std::vector<PadicPoint> zeros;
  for (int i = 0; i < k; ++i) {
    auto P = random_square_point(rng, f, N, xs);
    if (!P) return std::nullopt;
    zeros.push_back(*P);
    xs.push_back(P->x);
    vs.push_back(-P->y);
  }
  if (!distinct_mod_p(xs)) return std::nullopt;
  Poly c = interpolate(xs, vs);
  Poly h = poly_sub(poly_mul(c, c), f);
  h.resize(degree + 1, PadicNumber::exact_zero(p));
  if (!h.back().is_unit()) return std::nullopt;
  Poly q = h;
  for (const auto& x : xs) q = divide_linear(q, x);
  auto extra = small_roots(q);
  if (!extra) return std::nullopt;
  for (const auto& x : *extra) {
    PadicPoint P{x, -eval(c, x), false};
    if (!P.y.is_unit()) return std::nullopt;
    zeros.push_back(P);
  }
  std::vector<PadicNumber> all;
  for (const auto& P : zeros) all.push_back(P.x);
  // a repeated zero would need a multiplicity
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j)
      if (certified(all[i] - all[j]) >= N - 2) return std::nullopt;
  HyperellipticFunction out;
  out.c = c;
  for (const auto& P : zeros) out.divisor.push_back({P, 1});
  if (even) {
    auto pole = random_square_point(rng, f, N);
    if (!pole) return std::nullopt;
    for (const auto& x : all)
      if (certified(x - pole->x) >= N - 2) return std::nullopt;
    out.pole = *pole;
    out.divisor.push_back({*pole, -(genus + 1)});
    out.divisor.push_back({PadicPoint{pole->x, -pole->y, false}, -(genus + 1)});
  } else {
    PadicPoint inf{PadicNumber::exact_zero(p), PadicNumber::exact_zero(p), true};
    out.divisor.push_back({inf, -static_cast<int>(degree)});
  }
  return out;
}

inline Poly integer_poly(const std::vector<mpz_class>& f, long p, int N) {
  Poly out;
  for (const auto& c : f) out.push_back(PadicNumber::integer(p, c, N));
  return out;
}

// Principal divisor on an even-degree fixture curve with the function values at inf+ and inf-.
inline std::optional<PrincipalDivisor> random_even_principal(std::mt19937_64& rng, const CurveProblem& pr, int N) {
  long p = pr.prime();
  auto F = random_hyperelliptic_function(rng, integer_poly(pr.f(), p, N), pr.genus(), N);
  if (!F) return std::nullopt;
  PrincipalDivisor out;
  out.points = F->divisor;
  PadicNumber root_d = PadicNumber::integer(p, pr.sqrt_leading(), N);
  PadicNumber lead = F->c.back();
  for (const auto& cusp : pr.cusps()) {
    PadicNumber v = (cusp.id == "inf+" ? root_d : -root_d) + lead;
    if (v.is_zero()) return std::nullopt;
    out.cusp_values.push_back(v);
  }
  return out;
}

// Random point with unit x on y^3 = x^3 + a x^2 + x away from the restricted discs.
inline std::optional<PadicPoint> random_cubic_point(std::mt19937_64& rng, const ColemanIntegrator& integ, int N) {
  const CurveProblem& pr = integ.problem();
  long p = pr.prime(), a = pr.parameter_a();
  for (int attempt = 0; attempt < 60; ++attempt) {
    PadicNumber x = random_integer(rng, p, N);
    if (!x.is_unit()) continue;
    mpz_class xi = x.to_integer();
    mpz_class g = xi * xi * xi + a * xi * xi + xi;
    long gbar = mpz_class(((g % p) + p) % p).get_si();
    std::vector<long> roots;
    for (long r = 1; r < p; ++r)
      if (r * r % p * r % p == gbar) roots.push_back(r);
    if (roots.empty()) continue;
    long r = roots[rng() % roots.size()];
    mpz_class y = hensel_lift({-g, 0, 0, 1}, r, p, N);
    PadicPoint P{x, PadicNumber::integer(p, y, N), false};
    if (integ.superelliptic()->restricted(P)) continue;
    return P;
  }
  return std::nullopt;
}

// (y - alpha x - beta) / (x - x1) with the line through two random points; values u - alpha at the cusp u = y/x.
inline std::optional<PrincipalDivisor> random_cubic_principal(std::mt19937_64& rng, const ColemanIntegrator& integ,
                                                              int N) {
  const CurveProblem& pr = integ.problem();
  long p = pr.prime(), a = pr.parameter_a();
  auto A = random_cubic_point(rng, integ, N);
  auto B = random_cubic_point(rng, integ, N);
  auto D = random_cubic_point(rng, integ, N);
  if (!A || !B || !D) return std::nullopt;
  PadicNumber dx = B->x - A->x;
  if (dx.is_zero() || dx.valuation() > 1) return std::nullopt;
  PadicNumber alpha = (B->y - A->y) / dx;
  PadicNumber beta = A->y - alpha * A->x;
  // (alpha x + beta)^3 = x^3 + a x^2 + x
  PadicNumber lead = alpha.pow(3) - 1;
  if (lead.is_zero() || lead.valuation() > 0) return std::nullopt;
  PadicNumber xc = -(3 * alpha * alpha * beta - a) / lead - A->x - B->x;
  PadicPoint C{xc, alpha * xc + beta, false};
  if (!xc.is_unit() || integ.superelliptic()->restricted(C)) return std::nullopt;
  std::vector<PadicPoint> zeros{*A, *B, C};
  for (size_t i = 0; i < zeros.size(); ++i)
    for (size_t j = i + 1; j < zeros.size(); ++j)
      if (certified(zeros[i].x - zeros[j].x) >= N - 4) return std::nullopt;
  PrincipalDivisor out;
  for (const auto& Z : zeros) out.points.push_back({Z, 1});
  for (const auto& z : integ.superelliptic()->cube_roots_of_unity()) {
    PadicPoint E{D->x, D->y * z, false};
    if (integ.superelliptic()->restricted(E)) return std::nullopt;
    for (const auto& [Z, m] : out.points)
      if (m > 0 && certified(Z.x - E.x) >= N - 2) return std::nullopt;
    out.points.push_back({E, -1});
  }
  for (const auto& r : geometric_residues(pr, LogDifferential{std::vector<PadicNumber>(pr.basis_size(), PadicNumber::integer(p, 1, N)), "", false}, N)) {
    PadicNumber u = r.cusp_id == "Q1" ? PadicNumber::integer(p, 1, N) : r.embedding.root();
    PadicNumber v = u - alpha;
    if (v.is_zero()) return std::nullopt;
    out.cusp_values.push_back(v);
  }
  return out;
}

}  // namespace achab::testing
