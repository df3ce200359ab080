#include "achab/frobenius.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "achab/pseries.hpp"

namespace achab {

namespace {

using Poly = std::vector<PadicNumber>;
using IntPoly = std::vector<mpz_class>;

long inverse_mod(long a, long p) {
  mpz_class r, m = p;
  mpz_class x = a;
  mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r.get_si();
}

// gcd(fbar, fbar') is a nonzero constant.
bool separable_mod_p(const std::vector<long>& f, long p) {
  auto trim = [](std::vector<long>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
  };
  std::vector<long> a = f, b;
  trim(a);
  for (size_t i = 1; i < a.size(); ++i) b.push_back(static_cast<long>(i % p) * a[i] % p);
  trim(b);
  while (!b.empty()) {
    long inv = inverse_mod(b.back(), p);
    while (a.size() >= b.size()) {
      long q = a.back() * inv % p;
      size_t shift = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) a[i + shift] = ((a[i + shift] - q * b[i]) % p + p) % p;
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a.size() == 1;
}

int ceil_log(long p, const mpz_class& n) {
  int k = 0;
  mpz_class q = 1;
  while (q < n) {
    q *= p;
    ++k;
  }
  return k;
}

void add_into(Poly& acc, const Poly& b, long p, size_t shift = 0) {
  if (acc.size() < b.size() + shift) acc.resize(b.size() + shift, PadicNumber::exact_zero(p));
  for (size_t i = 0; i < b.size(); ++i) {
    if (b[i].is_exact_zero()) continue;
    acc[i + shift] += b[i];
  }
}

Poly poly_mul(const Poly& a, const Poly& b, long p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, PadicNumber::exact_zero(p));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_exact_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_exact_zero()) continue;
      c[i + j] += a[i] * b[j];
    }
  }
  return c;
}

Poly poly_scale(const Poly& a, const PadicNumber& c) {
  Poly out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(x * c);
  return out;
}

Poly poly_derivative(const Poly& a) {
  Poly out;
  for (size_t i = 1; i < a.size(); ++i) out.push_back(a[i].scaled(mpz_class(static_cast<unsigned long>(i))));
  return out;
}

PadicNumber poly_eval(const Poly& a, const PadicNumber& x) {
  if (a.empty()) return PadicNumber::exact_zero(x.prime());
  PadicNumber acc = a.back();
  for (size_t i = a.size() - 1; i-- > 0;) acc = acc * x + a[i];
  return acc;
}

// a = q f + r with deg r < deg f; f has unit leading coefficient.
void poly_divmod(Poly a, const Poly& f, const PadicNumber& lc_inv, Poly& q, Poly& r) {
  long p = lc_inv.prime();
  int d = static_cast<int>(f.size()) - 1;
  int n = static_cast<int>(a.size()) - 1;
  q.assign(n >= d ? n - d + 1 : 0, PadicNumber::exact_zero(p));
  for (int top = n; top >= d; --top) {
    if (a[top].is_exact_zero()) continue;
    PadicNumber c = a[top] * lc_inv;
    q[top - d] = c;
    for (int j = 0; j < d; ++j) {
      if (f[j].is_exact_zero()) continue;
      a[top - d + j] -= c * f[j];
    }
    a[top] = PadicNumber::exact_zero(p);
  }
  a.resize(std::min<int>(a.size(), d), PadicNumber::exact_zero(p));
  r = std::move(a);
}

IntPoly int_mul(const IntPoly& a, const IntPoly& b, const mpz_class& mod) {
  IntPoly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  for (auto& x : c) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), mod.get_mpz_t());
  return c;
}

// x^r = a_r f + b_r f' for r < deg f.
struct Decomposition {
  std::vector<Poly> a;
  std::vector<Poly> b;
};

Decomposition decompose_powers(const Poly& f, const PadicNumber& lc_inv) {
  long p = lc_inv.prime();
  int d = static_cast<int>(f.size()) - 1;
  Poly df = poly_derivative(f);
  // columns: x^c f' mod f
  PadicMatrix m(d, d, p);
  for (int c = 0; c < d; ++c) {
    Poly shifted(c, PadicNumber::exact_zero(p));
    shifted.insert(shifted.end(), df.begin(), df.end());
    Poly q, r;
    poly_divmod(shifted, f, lc_inv, q, r);
    for (int i = 0; i < d; ++i) m(i, c) = i < static_cast<int>(r.size()) ? r[i] : PadicNumber::exact_zero(p);
  }
  std::vector<PadicNumber> e0(d, PadicNumber::exact_zero(p));
  e0[0] = PadicNumber::integer(p, 1, f[0].precision() == PadicNumber::kInfinity ? 1 << 12 : f.back().precision());
  for (const auto& c : f)
    if (!c.is_exact_zero()) e0[0] = PadicNumber::integer(p, 1, std::max(c.precision(), e0[0].precision()));
  std::vector<PadicNumber> g = solve(m, e0);
  Decomposition out;
  for (int r = 0; r < d; ++r) {
    Poly xr(r, PadicNumber::exact_zero(p));
    xr.insert(xr.end(), g.begin(), g.end());
    Poly q, b;
    poly_divmod(xr, f, lc_inv, q, b);
    // a_r = (x^r - b f') / f
    Poly num = poly_scale(poly_mul(b, df, p), PadicNumber::integer(p, -1, e0[0].precision()));
    if (static_cast<int>(num.size()) <= r) num.resize(r + 1, PadicNumber::exact_zero(p));
    num[r] += PadicNumber::integer(p, 1, e0[0].precision());
    Poly a, rem;
    poly_divmod(num, f, lc_inv, a, rem);
    out.a.push_back(a);
    out.b.push_back(b);
  }
  return out;
}

struct KedlayaPlan {
  int terms = 0;      // k = 0 .. terms - 1
  int levels = 0;     // highest m
  int log_loss = 0;
  int input_precision = 0;
};

KedlayaPlan plan(long p, int d, int target) {
  KedlayaPlan pl;
  int loss = 2;
  for (int iter = 0; iter < 8; ++iter) {
    int kmax = target + loss;
    long mmax = (p * (2L * kmax + 1) - 1) / 2;
    long degmax = static_cast<long>(d) * p * kmax + p * d;
    mpz_class bound = std::max(2 * mmax + 1, 2 * degmax + d);
    int next = ceil_log(p, bound) + 1;
    if (next == loss) break;
    loss = next;
  }
  pl.log_loss = loss;
  pl.terms = target + loss + 1;
  pl.levels = static_cast<int>((p * (2L * (pl.terms - 1) + 1) - 1) / 2);
  double chain = static_cast<double>(pl.levels) / static_cast<double>(p - 1);
  pl.input_precision = target + static_cast<int>(std::ceil(chain)) + loss + 6;
  return pl;
}

struct FormResult {
  std::vector<PadicNumber> row;
  ExactPart exact;
};

FormResult reduce_form(int i, const HyperellipticCurve& curve, const Poly& f, const PadicNumber& lc_inv,
                       const Decomposition& dec, const std::vector<IntPoly>& epow, const std::vector<mpz_class>& binom,
                       int kin, int cap) {
  long p = curve.prime();
  int d = curve.degree();
  const mpz_class mod = prime_power(p, kin);
  int terms = static_cast<int>(epow.size());
  int levels = static_cast<int>((p * (2L * (terms - 1) + 1) - 1) / 2);
  std::vector<Poly> C(levels + 1);
  size_t shift = static_cast<size_t>(p * (i + 1) - 1);
  for (int k = 0; k < terms; ++k) {
    int m = static_cast<int>((p * (2L * k + 1) - 1) / 2);
    Poly term(shift + epow[k].size(), PadicNumber::exact_zero(p));
    for (size_t j = 0; j < epow[k].size(); ++j) {
      mpz_class n = binom[k] * epow[k][j];
      mpz_fdiv_r(n.get_mpz_t(), n.get_mpz_t(), mod.get_mpz_t());
      if (n == 0) {
        term[shift + j] = PadicNumber::zero(p, kin + 1);
      } else {
        term[shift + j] = PadicNumber::integer(p, n * p, kin + 1);
      }
    }
    add_into(C[m], term, p);
  }
  FormResult out;
  out.exact.inverse_odd.resize(levels + 1);
  for (int m = levels; m >= 1; --m) {
    if (C[m].empty()) continue;
    Poly q, r;
    poly_divmod(std::move(C[m]), f, lc_inv, q, r);
    C[m].clear();
    add_into(C[m - 1], q, p);
    Poly a, b;
    for (int s = 0; s < static_cast<int>(r.size()); ++s) {
      if (r[s].is_exact_zero()) continue;
      add_into(a, poly_scale(dec.a[s], r[s]), p);
      add_into(b, poly_scale(dec.b[s], r[s]), p);
    }
    add_into(C[m - 1], a, p);
    mpq_class two_over(2, 2 * m - 1);
    Poly db = poly_derivative(b);
    for (auto& c : db) c = c.scaled(two_over);
    add_into(C[m - 1], db, p);
    Poly hb = b;
    for (auto& c : hb) c = c.scaled(mpq_class(-two_over));
    out.exact.inverse_odd[m] = std::move(hb);
  }
  // level 0: x^(j+d-1) dx/y = d(x^j y)/lead - (lower terms)
  Poly c0 = std::move(C[0]);
  Poly df = poly_derivative(f);
  for (int top = static_cast<int>(c0.size()) - 1; top >= d - 1; --top) {
    if (c0[top].is_exact_zero()) continue;
    int j = top - d + 1;
    // Q_j = (2j x^(j-1) f + x^j f') / 2
    Poly qj;
    if (j > 0) add_into(qj, poly_scale(f, PadicNumber::integer(p, j, kin + 8)), p, j - 1);
    Poly half_df = df;
    for (auto& c : half_df) c = c.scaled(mpq_class(1, 2));
    add_into(qj, half_df, p, j);
    PadicNumber coef = c0[top] / qj[top];
    if (static_cast<int>(out.exact.times_y.size()) <= j) out.exact.times_y.resize(j + 1, PadicNumber::exact_zero(p));
    out.exact.times_y[j] += coef;
    for (int s = 0; s <= top; ++s) {
      if (s < static_cast<int>(qj.size()) && !qj[s].is_exact_zero()) c0[s] -= coef * qj[s];
    }
    c0[top] = PadicNumber::exact_zero(p);
  }
  out.row.assign(d - 1, PadicNumber::zero(p, cap));
  for (int s = 0; s < d - 1 && s < static_cast<int>(c0.size()); ++s) {
    if (!c0[s].is_exact_zero()) out.row[s] = c0[s].truncated(cap);
  }
  for (auto& level : out.exact.inverse_odd)
    for (auto& c : level) c = c.is_exact_zero() ? PadicNumber::zero(p, cap) : c.truncated(cap);
  for (auto& c : out.exact.times_y) c = c.is_exact_zero() ? PadicNumber::zero(p, cap) : c.truncated(cap);
  return out;
}

FrobeniusData run_kedlaya(const HyperellipticCurve& curve, int target, int input_precision, Execution mode) {
  long p = curve.prime();
  int d = curve.degree();
  KedlayaPlan pl = plan(p, d, target);
  int kin = std::min(input_precision, curve.coefficient_precision());
  const mpz_class mod = prime_power(p, kin);
  Poly f;
  IntPoly F;
  for (const auto& c : curve.f()) {
    if (!c.is_zero() && c.valuation() < 0) fail(ErrorCode::BadReduction, "curve coefficients must be p-integral");
    mpz_class n = c.is_exact_zero() ? mpz_class(0) : c.to_integer();
    mpz_fdiv_r(n.get_mpz_t(), n.get_mpz_t(), mod.get_mpz_t());
    F.push_back(n);
    f.push_back(n == 0 && c.is_exact_zero() ? PadicNumber::exact_zero(p) : PadicNumber::integer(p, n, kin));
  }
  PadicNumber lc_inv = f.back().inverse();
  Decomposition dec = decompose_powers(f, lc_inv);

  // E = f(x^p) - f(x)^p
  IntPoly fp = {1};
  for (long k = 0; k < p; ++k) fp = int_mul(fp, F, mod);
  IntPoly E(fp.size(), 0);
  for (size_t i = 0; i < F.size(); ++i) E[i * p] += F[i];
  for (size_t i = 0; i < fp.size(); ++i) {
    E[i] -= fp[i];
    mpz_fdiv_r(E[i].get_mpz_t(), E[i].get_mpz_t(), mod.get_mpz_t());
  }
  // 1/phi(y) = y^(-p) sum_k binom(-1/2, k) (E / y^(2p))^k
  std::vector<IntPoly> epow = {IntPoly{1}};
  std::vector<mpz_class> binom = {1};
  mpz_class four_inv;
  mpz_class four(4);
  mpz_invert(four_inv.get_mpz_t(), four.get_mpz_t(), mod.get_mpz_t());
  mpq_class b = 1;
  for (int k = 1; k < pl.terms; ++k) {
    epow.push_back(int_mul(epow.back(), E, mod));
    b *= mpq_class(-(2 * k - 1), 2 * k);
    mpz_class num = b.get_num(), den = b.get_den(), inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    mpz_class v = num * inv;
    mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
    binom.push_back(v);
  }
  int cap = pl.terms + 1 - pl.log_loss;

  int dim = d - 1;
  std::vector<FormResult> results(dim);
  if (mode == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < dim; ++i) results[i] = reduce_form(i, curve, f, lc_inv, dec, epow, binom, kin, cap);
  } else {
    for (int i = 0; i < dim; ++i) results[i] = reduce_form(i, curve, f, lc_inv, dec, epow, binom, kin, cap);
  }
  FrobeniusData out;
  out.p = p;
  out.working_precision = kin;
  out.series_terms = pl.terms;
  out.matrix = PadicMatrix(dim, dim, p);
  int prec = cap;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      out.matrix(i, j) = results[i].row[j];
      prec = std::min(prec, results[i].row[j].precision());
    }
    out.exact.push_back(std::move(results[i].exact));
  }
  out.precision = prec;
  return out;
}

PadicNumber exact_one(long p, int precision) { return PadicNumber::integer(p, 1, precision); }

}  // namespace

HyperellipticCurve::HyperellipticCurve(long p, std::vector<PadicNumber> f) : p_(p), f_(std::move(f)) {
  while (!f_.empty() && f_.back().is_exact_zero()) f_.pop_back();
  if (degree() < 3) fail(ErrorCode::UnsupportedFamily, "hyperelliptic curve needs degree at least 3");
  if (p_ == 2) fail(ErrorCode::BadReduction, "p = 2 is not supported");
  if (!f_.back().is_unit()) fail(ErrorCode::BadReduction, "leading coefficient must be a p-adic unit");
  std::vector<long> fbar;
  for (const auto& c : f_) {
    if (!c.is_zero() && c.valuation() < 0) fail(ErrorCode::BadReduction, "curve coefficients must be p-integral");
    fbar.push_back(c.is_zero() ? 0 : c.residue());
  }
  if (!separable_mod_p(fbar, p_)) fail(ErrorCode::BadReduction, "f has repeated roots mod " + std::to_string(p_));
}

HyperellipticCurve HyperellipticCurve::from_integers(const std::vector<mpz_class>& f, long p, int precision) {
  std::vector<PadicNumber> c;
  for (const auto& x : f) c.push_back(x == 0 ? PadicNumber::exact_zero(p) : PadicNumber::integer(p, x, precision));
  return HyperellipticCurve(p, std::move(c));
}

int HyperellipticCurve::coefficient_precision() const {
  int n = PadicNumber::kInfinity;
  for (const auto& c : f_) n = std::min(n, c.precision());
  return n;
}

PadicNumber HyperellipticCurve::eval(const PadicNumber& x) const { return poly_eval(f_, x); }

PadicNumber HyperellipticCurve::eval_derivative(const PadicNumber& x) const { return poly_eval(poly_derivative(f_), x); }

bool HyperellipticCurve::on_curve(const PadicPoint& pt) const {
  if (pt.infinite) return true;
  return pt.y * pt.y == eval(pt.x);
}

bool HyperellipticCurve::in_infinite_disc(const PadicPoint& pt) const {
  return pt.infinite || (!pt.x.is_zero() && pt.x.valuation() < 0);
}

bool HyperellipticCurve::in_weierstrass_disc(const PadicPoint& pt) const {
  if (in_infinite_disc(pt)) return !even_degree();
  return pt.y.is_zero() || pt.y.valuation() > 0;
}

bool HyperellipticCurve::same_disc(const PadicPoint& a, const PadicPoint& b) const {
  bool ia = in_infinite_disc(a), ib = in_infinite_disc(b);
  if (ia || ib) {
    if (!(ia && ib)) return false;
    if (!even_degree()) return true;
    // sign of y / x^(g+1) at the two points at infinity
    int g = genus();
    PadicNumber za = a.y / a.x.pow(g + 1), zb = b.y / b.x.pow(g + 1);
    return za.residue() == zb.residue();
  }
  return a.x.residue() == b.x.residue() && a.y.residue() == b.y.residue();
}

PadicPoint HyperellipticCurve::involution(const PadicPoint& pt) const {
  if (pt.infinite) return pt;
  return PadicPoint{pt.x, -pt.y, false};
}

PadicNumber ExactPart::evaluate(const PadicNumber& x, const PadicNumber& y) const {
  long p = x.prime();
  PadicNumber total = PadicNumber::exact_zero(p);
  PadicNumber yinv = y.inverse();
  PadicNumber y2inv = yinv * yinv;
  PadicNumber ypow = yinv;  // y^(1-2m) for m = 1
  for (size_t m = 1; m < inverse_odd.size(); ++m) {
    if (!inverse_odd[m].empty()) total += poly_eval(inverse_odd[m], x) * ypow;
    ypow *= y2inv;
  }
  if (!times_y.empty()) total += poly_eval(times_y, x) * y;
  return total;
}

PadicNumber FrobeniusData::trace() const {
  PadicNumber t = PadicNumber::exact_zero(p);
  for (int i = 0; i < matrix.rows(); ++i) t += matrix(i, i);
  return t;
}

int frobenius_input_precision(const HyperellipticCurve& curve, int precision) {
  return plan(curve.prime(), curve.degree(), precision).input_precision + 24;
}

FrobeniusData frobenius_matrix(const HyperellipticCurve& curve, int precision, Execution mode) {
  KedlayaPlan pl = plan(curve.prime(), curve.degree(), precision);
  int kin = pl.input_precision;
  for (int attempt = 0; attempt < 4; ++attempt) {
    FrobeniusData data = run_kedlaya(curve, precision, kin, mode);
    if (data.precision >= precision) return data;
    if (kin >= curve.coefficient_precision()) break;
    kin += precision - data.precision + 4;
  }
  fail(ErrorCode::PrecisionExceeded,
       "Frobenius matrix cannot reach O(p^" + std::to_string(precision) + ") from the given coefficients");
}

long count_points(const HyperellipticCurve& curve) {
  long p = curve.prime();
  std::vector<long> f;
  for (const auto& c : curve.f()) f.push_back(c.is_exact_zero() ? 0 : c.residue());
  long count = 0;
  for (long x = 0; x < p; ++x) {
    long v = 0;
    for (size_t i = f.size(); i-- > 0;) v = (v * x + f[i]) % p;
    if (v == 0) {
      count += 1;
      continue;
    }
    long e = 1, base = v, exp = (p - 1) / 2;
    while (exp > 0) {
      if (exp & 1) e = e * base % p;
      base = base * base % p;
      exp >>= 1;
    }
    if (e == 1) count += 2;
  }
  if (!curve.even_degree()) return count + 1;
  long lc = f.back();
  long e = 1, base = lc, exp = (p - 1) / 2;
  while (exp > 0) {
    if (exp & 1) e = e * base % p;
    base = base * base % p;
    exp >>= 1;
  }
  return count + (e == 1 ? 2 : 0);
}

long count_points_from_frobenius(const HyperellipticCurve& curve, const FrobeniusData& data) {
  long p = curve.prime();
  PadicNumber t = data.trace();
  int digits = std::min(t.precision(), 12);
  mpz_class mod = prime_power(p, digits);
  mpz_class r = t.truncated(digits).to_integer();
  if (r > mod / 2) r -= mod;
  long trace = r.get_si();
  long ap = trace;
  if (curve.even_degree()) {
    long lc = curve.f().back().residue();
    long e = 1, base = lc, exp = (p - 1) / 2;
    while (exp > 0) {
      if (exp & 1) e = e * base % p;
      base = base * base % p;
      exp >>= 1;
    }
    ap = trace - (e == 1 ? p : -p);
  }
  return p + 1 - ap;
}

namespace {

// Local expansion of x^i dx/y on the disc of `center`, parameter t with
// x = x0 + p t (non-Weierstrass) or y = y0 + p t (Weierstrass).
struct LocalChart {
  bool y_parameter = false;
  PadicPoint center;
  std::vector<TruncatedSeries> forms;
};

LocalChart local_chart(const HyperellipticCurve& curve, const PadicPoint& center, int precision) {
  long p = curve.prime();
  int order = 2 * precision + 4;
  LocalChart chart;
  chart.center = center;
  chart.y_parameter = curve.in_weierstrass_disc(center);
  int dim = curve.dimension();
  int prec = std::max(center.x.precision(), center.y.precision());
  prec = std::min(prec, precision + order);
  prec = std::max(prec, precision + 8);
  PadicNumber pp = PadicNumber::integer(p, p, prec);
  Poly df = poly_derivative(curve.f());
  std::vector<PadicNumber> x(order, PadicNumber::exact_zero(p)), y(order, PadicNumber::exact_zero(p));
  int rounds = 2;
  while ((1 << (rounds - 2)) < order) ++rounds;
  std::vector<PadicNumber> den;
  PadicNumber scale = pp;
  if (!chart.y_parameter) {
    x[0] = center.x;
    x[1] = pp;
    y[0] = center.y;
    std::vector<PadicNumber> fx = series_ops::compose_poly(curve.f(), x, order);
    for (int r = 0; r < rounds; ++r) {
      std::vector<PadicNumber> res = series_ops::mul(y, y, order);
      for (int n = 0; n < order; ++n) res[n] -= fx[n];
      std::vector<PadicNumber> twoy = series_ops::scale(y, PadicNumber::integer(p, 2, prec));
      std::vector<PadicNumber> step = series_ops::mul(res, series_ops::inverse(twoy, order), order);
      for (int n = 0; n < order; ++n) y[n] -= step[n];
    }
    den = y;
  } else {
    y[0] = center.y;
    y[1] = pp;
    x[0] = center.x;
    std::vector<PadicNumber> yy = series_ops::mul(y, y, order);
    for (int r = 0; r < rounds; ++r) {
      std::vector<PadicNumber> res = series_ops::compose_poly(curve.f(), x, order);
      for (int n = 0; n < order; ++n) res[n] -= yy[n];
      std::vector<PadicNumber> dfx = series_ops::compose_poly(df, x, order);
      std::vector<PadicNumber> step = series_ops::mul(res, series_ops::inverse(dfx, order), order);
      for (int n = 0; n < order; ++n) x[n] -= step[n];
    }
    den = series_ops::compose_poly(df, x, order);
    scale = pp * 2;
  }
  std::vector<PadicNumber> inv = series_ops::inverse(den, order);
  std::vector<PadicNumber> xi(order, PadicNumber::exact_zero(p));
  xi[0] = exact_one(p, prec + order);
  for (int i = 0; i < dim; ++i) {
    std::vector<PadicNumber> g = series_ops::scale(series_ops::mul(xi, inv, order), scale);
    chart.forms.emplace_back(p, g, order + 1, 1.0);
    xi = series_ops::mul(xi, x, order);
  }
  return chart;
}

PadicNumber chart_parameter(const LocalChart& chart, const PadicPoint& pt) {
  long p = chart.center.x.prime();
  PadicNumber d = chart.y_parameter ? pt.y - chart.center.y : pt.x - chart.center.x;
  PadicNumber t = d.divided(mpz_class(p));
  if (!t.is_zero() && t.valuation() < 0) fail(ErrorCode::DifferentDiscs, "points are not in one residue disc");
  return t;
}

PadicPoint weierstrass_point_in_disc(const HyperellipticCurve& curve, const PadicPoint& pt, int precision) {
  long p = curve.prime();
  PadicNumber x = PadicNumber::integer(p, pt.x.residue(), precision);
  for (int r = 0; r < 2 * precision + 4; ++r) {
    PadicNumber fx = curve.eval(x);
    if (fx.is_zero()) break;
    x -= fx / curve.eval_derivative(x);
  }
  return PadicPoint{x.truncated(precision), PadicNumber::exact_zero(p), false};
}

std::vector<PadicNumber> vsub(const std::vector<PadicNumber>& a, const std::vector<PadicNumber>& b) {
  std::vector<PadicNumber> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

std::vector<PadicNumber> vadd(const std::vector<PadicNumber>& a, const std::vector<PadicNumber>& b) {
  std::vector<PadicNumber> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

std::vector<PadicNumber> vhalf(const std::vector<PadicNumber>& a) {
  std::vector<PadicNumber> out;
  for (const auto& x : a) out.push_back(x.scaled(mpq_class(1, 2)));
  return out;
}

bool good_point(const HyperellipticCurve& curve, const PadicPoint& pt) {
  return !curve.in_infinite_disc(pt) && !curve.in_weierstrass_disc(pt);
}

// Integrals between two finite non-Weierstrass points via Frobenius-fixed points.
std::vector<PadicNumber> between_good(const HyperellipticCurve& curve, const FrobeniusData& data, const PadicPoint& P,
                                      const PadicPoint& Q, int precision) {
  if (curve.same_disc(P, Q)) return tiny_integrals_on_basis(curve, P, Q, precision);
  int work = precision + 6;
  PadicPoint tp = teichmuller_point(curve, P, work);
  PadicPoint tq = teichmuller_point(curve, Q, work);
  int dim = curve.dimension();
  std::vector<PadicNumber> rhs(dim);
  for (int i = 0; i < dim; ++i) rhs[i] = data.exact[i].evaluate(tq.x, tq.y) - data.exact[i].evaluate(tp.x, tp.y);
  PadicMatrix a(dim, dim, curve.prime());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      a(i, j) = (i == j ? exact_one(curve.prime(), data.precision + 8) : PadicNumber::exact_zero(curve.prime())) -
                data.matrix(i, j);
  std::vector<PadicNumber> mid = solve(a, rhs);
  std::vector<PadicNumber> total = vadd(tiny_integrals_on_basis(curve, P, tp, precision), mid);
  return vadd(total, tiny_integrals_on_basis(curve, tq, Q, precision));
}

// Integral from a finite non-Weierstrass point B to X.
std::vector<PadicNumber> from_reference(const HyperellipticCurve& curve, const FrobeniusData& data, const PadicPoint& B,
                                        const PadicPoint& X, int precision) {
  if (X.infinite) {
    if (curve.even_degree())
      fail(ErrorCode::EndpointRestriction, "points at infinity of an even-degree model are not endpoints");
    return vhalf(between_good(curve, data, B, curve.involution(B), precision));
  }
  if (curve.in_infinite_disc(X))
    fail(ErrorCode::EndpointRestriction, "endpoint lies in a residue disc at infinity");
  if (curve.in_weierstrass_disc(X)) {
    PadicPoint W = weierstrass_point_in_disc(curve, X, std::max(precision + 8, X.x.precision()));
    std::vector<PadicNumber> toW = vhalf(between_good(curve, data, B, curve.involution(B), precision));
    return vadd(toW, tiny_integrals_on_basis(curve, W, X, precision));
  }
  return between_good(curve, data, B, X, precision);
}

}  // namespace

PadicPoint teichmuller_point(const HyperellipticCurve& curve, const PadicPoint& pt, int precision) {
  long p = curve.prime();
  if (!good_point(curve, pt)) fail(ErrorCode::EndpointRestriction, "Teichmuller points need a non-Weierstrass disc");
  PadicNumber x = pt.x.residue() == 0 ? PadicNumber::exact_zero(p) : teichmuller(pt.x, precision);
  PadicNumber fx = curve.eval(x).truncated(precision);
  PadicNumber y = padic_sqrt(fx, pt.y.residue());
  return PadicPoint{x, y, false};
}

std::vector<PadicNumber> tiny_integrals_on_basis(const HyperellipticCurve& curve, const PadicPoint& P,
                                                 const PadicPoint& Q, int precision) {
  int dim = curve.dimension();
  long p = curve.prime();
  if (P.infinite && Q.infinite) return std::vector<PadicNumber>(dim, PadicNumber::exact_zero(p));
  if (curve.in_infinite_disc(P) || curve.in_infinite_disc(Q))
    fail(ErrorCode::EndpointRestriction, "tiny integrals near infinity are not supported");
  if (!curve.same_disc(P, Q)) fail(ErrorCode::DifferentDiscs, "points are not in one residue disc");
  LocalChart chart = local_chart(curve, P, precision);
  PadicNumber t = chart_parameter(chart, Q);
  std::vector<PadicNumber> out;
  for (const auto& g : chart.forms) out.push_back(formal_antiderivative(g).evaluate(t));
  return out;
}

std::vector<PadicNumber> coleman_integrals_on_basis(const HyperellipticCurve& curve, const FrobeniusData& data,
                                                    const PadicPoint& P, const PadicPoint& Q, int precision) {
  if (curve.same_disc(P, Q) && !(P.infinite && !Q.infinite) && !(Q.infinite && !P.infinite))
    return tiny_integrals_on_basis(curve, P, Q, precision);
  PadicPoint B;
  if (good_point(curve, P)) {
    B = P;
  } else if (good_point(curve, Q)) {
    B = Q;
  } else {
    long p = curve.prime();
    bool found = false;
    for (long x = 0; x < p && !found; ++x) {
      PadicNumber xx = PadicNumber::integer(p, x, precision + 8);
      PadicNumber fx = curve.eval(xx);
      if (fx.is_zero() || fx.valuation() > 0) continue;
      try {
        B = PadicPoint{xx, padic_sqrt(fx), false};
        found = true;
      } catch (const Error&) {
      }
    }
    if (!found) fail(ErrorCode::EndpointRestriction, "no non-Weierstrass reference point available");
  }
  return vsub(from_reference(curve, data, B, Q, precision), from_reference(curve, data, B, P, precision));
}

}  // namespace achab
