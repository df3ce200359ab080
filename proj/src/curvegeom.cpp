#include "achab/curvegeom.hpp"

#include <algorithm>
#include <sstream>

namespace achab {

namespace {

constexpr int kGuardDigits = 8;
constexpr int kUnitSlack = 64;

long mod_p(const mpz_class& n, long p) { return mpz_fdiv_ui(n.get_mpz_t(), p); }

long balanced(long r, long p) { return r > p / 2 ? r - p : r; }

mpq_class eval_int_poly(const std::vector<mpz_class>& f, const mpq_class& x) {
  mpq_class acc = 0;
  for (size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
  return acc;
}

RationalPoly to_rational_poly(const std::vector<mpz_class>& f) {
  RationalPoly out;
  for (const auto& c : f) out.emplace_back(c);
  rpoly::trim(out);
  return out;
}

NumberField cyclotomic3() { return NumberField{"Q(zeta3)", {mpq_class(1), mpq_class(1), mpq_class(1)}}; }

std::vector<PadicNumber> padic_coeffs(const std::vector<mpz_class>& f, long p, int precision) {
  std::vector<PadicNumber> out;
  for (const auto& c : f) out.push_back(c == 0 ? PadicNumber::exact_zero(p) : PadicNumber::integer(p, c, precision));
  return out;
}

std::vector<mpz_class> derivative(const std::vector<mpz_class>& f) {
  std::vector<mpz_class> d;
  for (size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<long>(i));
  return d;
}

}  // namespace

std::string to_string(const RationalPoint& pt) { return "(" + pt.x.get_str() + ", " + pt.y.get_str() + ")"; }

PadicPoint to_padic(const RationalPoint& pt, long p, int precision) {
  return PadicPoint{PadicNumber::rational(p, pt.x, precision), PadicNumber::rational(p, pt.y, precision), false};
}

std::string to_string(DiscKind kind) {
  switch (kind) {
    case DiscKind::Affine: return "affine";
    case DiscKind::Weierstrass: return "weierstrass";
    case DiscKind::Infinite: return "infinite";
    case DiscKind::Cuspidal: return "cuspidal";
  }
  return "unknown";
}

CurveProblem CurveProblem::hyperelliptic(std::vector<mpz_class> f, RationalPoint base, std::vector<long> S, long p,
                                         int precision) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  CurveProblem c;
  c.family_ = CurveFamily::Hyperelliptic;
  c.f_ = std::move(f);
  if (c.degree() < 3) fail(ErrorCode::UnsupportedFamily, "hyperelliptic model needs degree at least 3");
  c.genus_ = (c.degree() - 1) / 2;
  if (c.degree() % 2 == 0) {
    if (c.f_.back() <= 0 || !mpz_perfect_square_p(c.f_.back().get_mpz_t()))
      fail(ErrorCode::UnsupportedFamily, "even-degree model needs a square leading coefficient");
    mpz_sqrt(c.sqrt_d_.get_mpz_t(), c.f_.back().get_mpz_t());
    c.cusps_ = {Cusp{"inf+", NumberField::rationals()}, Cusp{"inf-", NumberField::rationals()}};
  } else {
    c.sqrt_d_ = 0;
    c.cusps_ = {Cusp{"inf", NumberField::rationals()}};
  }
  c.base_ = std::move(base);
  c.S_ = std::move(S);
  c.p_ = p;
  c.precision_ = precision;
  c.validate();
  return c;
}

CurveProblem CurveProblem::superelliptic(long a, RationalPoint base, std::vector<long> S, long p, int precision) {
  CurveProblem c;
  c.family_ = CurveFamily::SuperellipticCubic;
  c.a_ = a;
  c.f_ = {mpz_class(0), mpz_class(1), mpz_class(a), mpz_class(1)};
  c.genus_ = 1;
  c.cusps_ = {Cusp{"Q1", NumberField::rationals()}, Cusp{"Q2", cyclotomic3()}};
  c.base_ = std::move(base);
  c.S_ = std::move(S);
  c.p_ = p;
  c.precision_ = precision;
  c.validate();
  return c;
}

CurveProblem CurveProblem::with_prime(long p, int precision) const {
  CurveProblem c = *this;
  c.p_ = p;
  c.precision_ = precision;
  c.validate();
  return c;
}

const Cusp& CurveProblem::cusp(const std::string& id) const {
  for (const auto& c : cusps_)
    if (c.id == id) return c;
  fail(ErrorCode::InvalidProblem, "unknown cusp '" + id + "'");
}

int CurveProblem::geometric_cusps() const {
  int n = 0;
  for (const auto& c : cusps_) n += c.degree();
  return n;
}

int CurveProblem::real_cusp_places() const {
  int n = 0;
  for (const auto& c : cusps_) n += c.field.real_places();
  return n;
}

int CurveProblem::complex_cusp_places() const {
  int n = 0;
  for (const auto& c : cusps_) n += c.field.complex_places();
  return n;
}

bool CurveProblem::on_curve(const RationalPoint& pt) const {
  if (family_ == CurveFamily::Hyperelliptic) return pt.y * pt.y == eval_int_poly(f_, pt.x);
  return pt.y * pt.y * pt.y == eval_int_poly(f_, pt.x);
}

bool CurveProblem::on_curve(const PadicPoint& pt) const {
  if (pt.infinite) return true;
  PadicNumber fx = PadicNumber::exact_zero(p_);
  for (size_t i = f_.size(); i-- > 0;) fx = fx * pt.x + PadicNumber::integer(p_, f_[i], pt.x.precision() + 2);
  PadicNumber lhs = family_ == CurveFamily::Hyperelliptic ? pt.y * pt.y : pt.y * pt.y * pt.y;
  return lhs == fx;
}

std::vector<std::vector<mpz_class>> CurveProblem::plane_equation() const {
  // rows indexed by the power of y, columns by the power of x
  int ydeg = family_ == CurveFamily::Hyperelliptic ? 2 : 3;
  std::vector<std::vector<mpz_class>> F(ydeg + 1, std::vector<mpz_class>(f_.size(), 0));
  for (size_t i = 0; i < f_.size(); ++i) F[0][i] = -f_[i];
  F[ydeg][0] = 1;
  return F;
}

bool CurveProblem::good_reduction_at(long q) const {
  if (family_ == CurveFamily::Hyperelliptic) {
    if (q == 2) return false;
    if (mod_p(f_.back(), q) == 0) return false;
    mpq_class disc = rpoly::discriminant(to_rational_poly(f_));
    return valuation_of(disc, q) == 0;
  }
  if (q == 2 || q == 3) return false;
  mpz_class d = mpz_class(a_) * a_ - 4;
  return mod_p(d, q) != 0;
}

void CurveProblem::validate() const {
  if (family_ == CurveFamily::Hyperelliptic) {
    if (rpoly::discriminant(to_rational_poly(f_)) == 0) fail(ErrorCode::InvalidProblem, "f is not squarefree");
  } else {
    if (a_ * a_ == 4) fail(ErrorCode::InvalidProblem, "a = +-2 gives a singular curve");
  }
  if (!on_curve(base_)) fail(ErrorCode::NotOnCurve, "base point " + to_string(base_) + " is not on the curve");
  if (p_ < 3 || !mpz_probab_prime_p(mpz_class(p_).get_mpz_t(), 30))
    fail(ErrorCode::BadReduction, "auxiliary prime must be an odd prime");
  if (std::find(S_.begin(), S_.end(), p_) != S_.end())
    fail(ErrorCode::BadReduction, "auxiliary prime must not lie in S");
  if (!good_reduction_at(p_)) fail(ErrorCode::BadReduction, "curve has bad reduction at " + std::to_string(p_));
  if (family_ == CurveFamily::SuperellipticCubic && p_ % 3 != 1)
    fail(ErrorCode::NonSeparableReduction, "cusp field Q(zeta3) must split at p, so p = 1 mod 3");
  if (family_ == CurveFamily::SuperellipticCubic && a_ % p_ == 0)
    fail(ErrorCode::BadReduction, "the auxiliary curves need p not dividing a");
  if (precision_ < 2) fail(ErrorCode::InvalidProblem, "precision must be at least 2");
}

LogDifferential basis_element(const CurveProblem& problem, int j) {
  int n = problem.basis_size();
  if (j < 0 || j >= n) fail(ErrorCode::ShapeMismatch, "basis index out of range");
  long p = problem.prime();
  LogDifferential w;
  w.coefficients.assign(n, PadicNumber::exact_zero(p));
  w.coefficients[j] = PadicNumber::integer(p, 1, problem.precision() + kUnitSlack);
  if (problem.family() == CurveFamily::Hyperelliptic) {
    w.label = j == 0 ? "dx/y" : (j == 1 ? "x*dx/y" : "x^" + std::to_string(j) + "*dx/y");
    w.holomorphic = j < problem.genus();
  } else {
    static const char* labels[] = {"dx/y^2", "x*dx/y^2", "dx/y"};
    w.label = labels[j];
    w.holomorphic = j == 0;
  }
  return w;
}

std::vector<LogDifferential> differential_basis(const CurveProblem& problem) {
  std::vector<LogDifferential> out;
  for (int j = 0; j < problem.basis_size(); ++j) out.push_back(basis_element(problem, j));
  return out;
}

FieldElement residue_at_cusp(const CurveProblem& problem, int j, const Cusp& cusp) {
  if (j < 0 || j >= problem.basis_size()) fail(ErrorCode::ShapeMismatch, "basis index out of range");
  if (problem.family() == CurveFamily::Hyperelliptic) {
    if (j < problem.genus()) return FieldElement::constant(cusp.field, 0);
    mpq_class r = mpq_class(1) / mpq_class(problem.sqrt_leading());
    if (cusp.id == "inf+") return FieldElement::constant(cusp.field, -r);
    if (cusp.id == "inf-") return FieldElement::constant(cusp.field, r);
    fail(ErrorCode::InvalidProblem, "unknown cusp '" + cusp.id + "'");
  }
  // omega_2 = -(1/u^2) dv/v and omega_3 = u * omega_2 near v = 0, u^3 = 1
  if (j == 0) return FieldElement::constant(cusp.field, 0);
  FieldElement u = cusp.id == "Q1" ? FieldElement::constant(cusp.field, 1) : FieldElement::generator(cusp.field);
  FieldElement minus_u_inv_sq = -(u * u).inverse();
  if (j == 1) return minus_u_inv_sq;
  return minus_u_inv_sq * u;
}

std::vector<GeometricCuspResidue> geometric_residues(const CurveProblem& problem, const LogDifferential& omega,
                                                     int precision) {
  std::vector<GeometricCuspResidue> out;
  long p = problem.prime();
  for (const auto& cusp : problem.cusps()) {
    for (const auto& phi : hensel_embed(cusp.field, p, precision)) {
      PadicNumber r = PadicNumber::exact_zero(p);
      for (int j = 0; j < problem.basis_size(); ++j) {
        if (omega.coefficients[j].is_exact_zero()) continue;
        FieldElement res = residue_at_cusp(problem, j, cusp);
        if (res.is_zero()) continue;
        r += omega.coefficients[j] * phi.apply(res);
      }
      out.push_back({cusp.id, phi, r});
    }
  }
  return out;
}

namespace series_ops {

std::vector<PadicNumber> mul(const std::vector<PadicNumber>& a, const std::vector<PadicNumber>& b, int order) {
  long p = !a.empty() ? a[0].prime() : b[0].prime();
  std::vector<PadicNumber> c(order, PadicNumber::exact_zero(p));
  for (int i = 0; i < std::min<int>(order, a.size()); ++i) {
    if (a[i].is_exact_zero()) continue;
    for (int j = 0; j < static_cast<int>(b.size()) && i + j < order; ++j) {
      if (b[j].is_exact_zero()) continue;
      c[i + j] += a[i] * b[j];
    }
  }
  return c;
}

std::vector<PadicNumber> inverse(const std::vector<PadicNumber>& a, int order) {
  long p = a[0].prime();
  std::vector<PadicNumber> b(order, PadicNumber::exact_zero(p));
  PadicNumber inv0 = a[0].inverse();
  b[0] = inv0;
  for (int n = 1; n < order; ++n) {
    PadicNumber acc = PadicNumber::exact_zero(p);
    for (int k = 1; k <= n && k < static_cast<int>(a.size()); ++k) {
      if (a[k].is_exact_zero()) continue;
      acc += a[k] * b[n - k];
    }
    b[n] = -(acc * inv0);
  }
  return b;
}

std::vector<PadicNumber> add(const std::vector<PadicNumber>& a, const std::vector<PadicNumber>& b) {
  long p = !a.empty() ? a[0].prime() : b[0].prime();
  std::vector<PadicNumber> c(std::max(a.size(), b.size()), PadicNumber::exact_zero(p));
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  return c;
}

std::vector<PadicNumber> scale(const std::vector<PadicNumber>& a, const PadicNumber& c) {
  std::vector<PadicNumber> out;
  for (const auto& x : a) out.push_back(x * c);
  return out;
}

std::vector<PadicNumber> compose_poly(const std::vector<PadicNumber>& c, const std::vector<PadicNumber>& s, int order) {
  long p = s[0].prime();
  std::vector<PadicNumber> acc(order, PadicNumber::exact_zero(p));
  for (size_t i = c.size(); i-- > 0;) {
    acc = mul(acc, s, order);
    acc[0] += c[i];
  }
  return acc;
}

}  // namespace series_ops

namespace {

using Coeffs = std::vector<PadicNumber>;

int newton_rounds(int order) {
  int rounds = 1;
  while ((1 << (rounds - 1)) < order) ++rounds;
  return rounds + 1;
}

// F(x,y), F_x, F_y on series for the affine model.
struct PlaneModel {
  CurveFamily family;
  Coeffs f;   // f(x) or G(x)
  Coeffs df;  // derivative
  int ypow;

  Coeffs F(const Coeffs& x, const Coeffs& y, int order) const {
    Coeffs yp = y;
    for (int i = 1; i < ypow; ++i) yp = series_ops::mul(yp, y, order);
    Coeffs fx = series_ops::compose_poly(f, x, order);
    for (auto& c : fx) c = -c;
    return series_ops::add(yp, fx);
  }
  Coeffs Fy(const Coeffs& y, int order) const {
    Coeffs out = ypow == 2 ? y : series_ops::mul(y, y, order);
    return series_ops::scale(out, PadicNumber::integer(f[0].prime(), ypow, f.back().precision()));
  }
  Coeffs Fx(const Coeffs& x, int order) const {
    Coeffs out = series_ops::compose_poly(df, x, order);
    for (auto& c : out) c = -c;
    return out;
  }
};

PlaneModel plane_model(const CurveProblem& problem, int precision) {
  long p = problem.prime();
  PlaneModel m;
  m.family = problem.family();
  m.f = padic_coeffs(problem.f(), p, precision);
  m.df = padic_coeffs(derivative(problem.f()), p, precision);
  m.ypow = problem.family() == CurveFamily::Hyperelliptic ? 2 : 3;
  return m;
}

Coeffs constant_series(const PadicNumber& c, int order) {
  Coeffs out(order, PadicNumber::exact_zero(c.prime()));
  out[0] = c;
  return out;
}

Coeffs linear_series(const PadicNumber& c0, long p, int precision, int order) {
  Coeffs out = constant_series(c0, order);
  if (order > 1) out[1] = PadicNumber::integer(p, p, precision);
  return out;
}

TruncatedSeries wrap(long p, Coeffs c, int tail) {
  return TruncatedSeries(p, std::move(c), tail, 1.0);
}

int series_precision(const CurveProblem& problem) { return problem.precision() + kGuardDigits; }
int series_order(const CurveProblem& problem) { return 2 * problem.precision(); }

mpz_class hensel_root_y(const CurveProblem& problem, const mpz_class& x0, long ybar, int precision) {
  long p = problem.prime();
  mpz_class fx = 0;
  for (size_t i = problem.f().size(); i-- > 0;) fx = fx * x0 + problem.f()[i];
  int ypow = problem.family() == CurveFamily::Hyperelliptic ? 2 : 3;
  std::vector<mpz_class> poly(ypow + 1, 0);
  poly[0] = -fx;
  poly[ypow] = 1;
  return hensel_lift(poly, ybar, p, precision);
}

mpz_class hensel_root_x(const CurveProblem& problem, const mpz_class& y0, long xbar, int precision) {
  long p = problem.prime();
  int ypow = problem.family() == CurveFamily::Hyperelliptic ? 2 : 3;
  mpz_class yp = 1;
  for (int i = 0; i < ypow; ++i) yp *= y0;
  std::vector<mpz_class> poly = problem.f();
  poly[0] -= yp;
  return hensel_lift(poly, mod_p(mpz_class(xbar), p), p, precision);
}

}  // namespace

ResidueDisc make_disc(const CurveProblem& problem, long xbar, long ybar, int order) {
  long p = problem.prime();
  int precision = std::max(series_precision(problem), order + kGuardDigits);
  PlaneModel model = plane_model(problem, precision);
  ResidueDisc d;
  d.xbar = xbar;
  d.ybar = ybar;
  std::ostringstream label;
  label << "(" << xbar << "," << ybar << ")";
  d.label = label.str();
  bool y_uniformizer = ybar == 0;
  if (!y_uniformizer) {
    d.kind = DiscKind::Affine;
    d.parameter = DiscParameter::X;
    mpz_class x0(balanced(xbar, p));
    mpz_class y0 = hensel_root_y(problem, x0, ybar, precision);
    // keep the balanced representative when it is already an exact root
    mpz_class yb(balanced(ybar, p));
    {
      mpz_class fx = 0;
      for (size_t i = problem.f().size(); i-- > 0;) fx = fx * x0 + problem.f()[i];
      mpz_class yp = model.ypow == 2 ? mpz_class(yb * yb) : mpz_class(yb * yb * yb);
      if (yp == fx) y0 = yb;
    }
    d.center = PadicPoint{PadicNumber::integer(p, x0, precision), PadicNumber::integer(p, y0, precision), false};
    Coeffs x = linear_series(d.center.x, p, precision, order);
    Coeffs y = constant_series(d.center.y, order);
    for (int r = 0; r < newton_rounds(order); ++r) {
      Coeffs fval = model.F(x, y, order);
      Coeffs step = series_ops::mul(fval, series_ops::inverse(model.Fy(y, order), order), order);
      for (int i = 0; i < order; ++i) y[i] -= step[i];
    }
    d.x = TruncatedSeries(p, x);
    d.y = wrap(p, y, order);
  } else {
    d.kind = DiscKind::Weierstrass;
    d.parameter = DiscParameter::Y;
    mpz_class y0 = 0;
    mpz_class x0 = hensel_root_x(problem, y0, xbar, precision);
    if (mpz_class(balanced(xbar, p)) == x0 - prime_power(p, precision)) x0 -= prime_power(p, precision);
    {
      // exact small root when available
      mpz_class xb(balanced(xbar, p));
      mpz_class fx = 0;
      for (size_t i = problem.f().size(); i-- > 0;) fx = fx * xb + problem.f()[i];
      if (fx == 0) x0 = xb;
    }
    d.center = PadicPoint{PadicNumber::integer(p, x0, precision), PadicNumber::exact_zero(p), false};
    Coeffs y = linear_series(PadicNumber::exact_zero(p), p, precision, order);
    Coeffs x = constant_series(d.center.x, order);
    for (int r = 0; r < newton_rounds(order); ++r) {
      Coeffs fval = model.F(x, y, order);
      Coeffs step = series_ops::mul(fval, series_ops::inverse(model.Fx(x, order), order), order);
      for (int i = 0; i < order; ++i) x[i] -= step[i];
    }
    d.x = wrap(p, x, order);
    d.y = TruncatedSeries(p, y);
  }
  if (problem.family() == CurveFamily::SuperellipticCubic && xbar != 0) {
    // u = y/x congruent to a cube root of unity: image of a cusp under the involution
    long a = problem.parameter_a();
    long xr = ((-1 % p) + p) % p;
    long inv_a = 0;
    for (long t = 1; t < p; ++t)
      if (((a % p + p) % p) * t % p == 1) inv_a = t;
    xr = xr * inv_a % p;
    if (xbar == xr) {
      long y3 = ybar * ybar % p * ybar % p;
      long x3 = xbar * xbar % p * xbar % p;
      if (y3 == x3) d.restricted = true;
    }
  }
  return d;
}

namespace {

ResidueDisc infinite_disc(const CurveProblem& problem, int sign, int order) {
  long p = problem.prime();
  ResidueDisc d;
  d.kind = DiscKind::Cuspidal;
  d.parameter = DiscParameter::W;
  d.restricted = true;
  d.center.infinite = true;
  if (!problem.even_degree()) {
    d.label = problem.family() == CurveFamily::Hyperelliptic ? "inf" : "cusp";
    return d;
  }
  d.label = sign > 0 ? "inf+" : "inf-";
  int precision = std::max(series_precision(problem), order + kGuardDigits);
  int deg = problem.degree();
  // z^2 = F(w) = sum f_i w^(deg - i), w = 1/x, z = y / x^(g+1)
  std::vector<mpz_class> rev(problem.f().rbegin(), problem.f().rend());
  Coeffs F = padic_coeffs(rev, p, precision);
  (void)deg;
  Coeffs w = linear_series(PadicNumber::exact_zero(p), p, precision, order);
  Coeffs Fw = series_ops::compose_poly(F, w, order);
  PadicNumber z0 = PadicNumber::integer(p, sign > 0 ? problem.sqrt_leading() : mpz_class(-problem.sqrt_leading()), precision);
  Coeffs z = constant_series(z0, order);
  for (int r = 0; r < newton_rounds(order); ++r) {
    Coeffs zz = series_ops::mul(z, z, order);
    Coeffs diff = series_ops::add(zz, series_ops::scale(Fw, PadicNumber::integer(p, -1, precision)));
    Coeffs step = series_ops::mul(diff, series_ops::inverse(series_ops::scale(z, PadicNumber::integer(p, 2, precision)), order), order);
    for (int i = 0; i < order; ++i) z[i] -= step[i];
  }
  d.center.x = PadicNumber::exact_zero(p);
  d.center.y = z0;
  d.x = TruncatedSeries(p, w);
  d.y = wrap(p, z, order);
  d.xbar = -1;
  d.ybar = mod_p(mpz_class(sign > 0 ? problem.sqrt_leading() : mpz_class(-problem.sqrt_leading())), p);
  return d;
}

}  // namespace

std::vector<ResidueDisc> residue_discs(const CurveProblem& problem) {
  long p = problem.prime();
  if (!problem.good_reduction_at(p)) fail(ErrorCode::BadReduction, "bad reduction at " + std::to_string(p));
  int order = series_order(problem);
  std::vector<long> fmod;
  for (const auto& c : problem.f()) fmod.push_back(mod_p(c, p));
  int ypow = problem.family() == CurveFamily::Hyperelliptic ? 2 : 3;
  std::vector<ResidueDisc> out;
  for (long x = 0; x < p; ++x) {
    long fx = 0;
    for (size_t i = fmod.size(); i-- > 0;) fx = (fx * x + fmod[i]) % p;
    for (long y = 0; y < p; ++y) {
      long yp = ypow == 2 ? y * y % p : y * y % p * y % p;
      if (yp != fx) continue;
      out.push_back(make_disc(problem, x, y, order));
    }
  }
  if (problem.family() == CurveFamily::Hyperelliptic) {
    if (problem.even_degree()) {
      out.push_back(infinite_disc(problem, +1, order));
      out.push_back(infinite_disc(problem, -1, order));
    } else {
      out.push_back(infinite_disc(problem, +1, order));
    }
  } else {
    // three cusps u^3 = 1 at v = 0
    for (long u = 1; u < p; ++u) {
      if (u * u % p * u % p != 1) continue;
      ResidueDisc d = infinite_disc(problem, +1, order);
      d.label = "cusp(u=" + std::to_string(u) + ")";
      d.xbar = -1;
      d.ybar = u;
      out.push_back(d);
    }
  }
  return out;
}

ResidueDisc disc_of(const CurveProblem& problem, const PadicPoint& pt) {
  long p = problem.prime();
  int order = series_order(problem);
  if (pt.infinite || (!pt.x.is_zero() && pt.x.valuation() < 0)) {
    if (!problem.even_degree()) return infinite_disc(problem, +1, order);
    int g = problem.genus();
    PadicNumber z = pt.y / pt.x.pow(g + 1);
    long zbar = z.residue();
    return infinite_disc(problem, zbar == mod_p(problem.sqrt_leading(), p) ? +1 : -1, order);
  }
  if (!pt.y.is_zero() && pt.y.valuation() < 0) fail(ErrorCode::NotOnCurve, "point with integral x and non-integral y");
  return make_disc(problem, pt.x.residue(), pt.y.residue(), order);
}

bool same_disc(const ResidueDisc& a, const ResidueDisc& b) {
  return a.xbar == b.xbar && a.ybar == b.ybar && a.kind == b.kind && a.label == b.label;
}

PadicNumber disc_parameter(const ResidueDisc& disc, const PadicPoint& pt) {
  long p = disc.center.y.prime();
  PadicNumber t;
  switch (disc.parameter) {
    case DiscParameter::X: t = (pt.x - disc.center.x).divided(mpz_class(p)); break;
    case DiscParameter::Y: t = (pt.y - disc.center.y).divided(mpz_class(p)); break;
    case DiscParameter::W: t = pt.x.inverse().divided(mpz_class(p)); break;
  }
  if (!t.is_zero() && t.valuation() < 0) fail(ErrorCode::DifferentDiscs, "point is not in disc " + disc.label);
  return t;
}

PadicPoint point_at(const ResidueDisc& disc, const PadicNumber& t) {
  PadicNumber a = disc.x.evaluate(t);
  PadicNumber b = disc.y.evaluate(t);
  if (disc.parameter == DiscParameter::W) {
    fail(ErrorCode::PoleOnDisc, "points of cuspidal discs are not affine");
  }
  return PadicPoint{a, b, false};
}

TruncatedSeries expand_differential_on_disc(const CurveProblem& problem, int j, const ResidueDisc& disc) {
  long p = problem.prime();
  if (disc.kind == DiscKind::Cuspidal) {
    if (problem.even_degree() && j < problem.genus()) {
      // x^j dx/y = -w^(g-1-j) dw / z
      int order = disc.y.order();
      Coeffs w = disc.x.coefficients();
      Coeffs wp = constant_series(PadicNumber::integer(p, -p, disc.y.coefficient(0).precision()), order);
      for (int i = 0; i < problem.genus() - 1 - j; ++i) wp = series_ops::mul(wp, w, order);
      Coeffs g = series_ops::mul(wp, series_ops::inverse(disc.y.coefficients(), order), order);
      return wrap(p, g, order + 1);
    }
    fail(ErrorCode::PoleOnDisc, "differential has a pole in cuspidal disc " + disc.label);
  }
  int order = std::min(disc.x.order(), disc.y.order());
  int precision = disc.center.x.is_exact_zero() ? disc.center.y.precision() : disc.center.x.precision();
  const Coeffs& x = disc.x.coefficients();
  const Coeffs& y = disc.y.coefficients();
  PadicNumber pp = PadicNumber::integer(p, p, precision);
  Coeffs num, den;
  if (problem.family() == CurveFamily::Hyperelliptic) {
    Coeffs xj = constant_series(PadicNumber::integer(p, 1, precision), order);
    for (int i = 0; i < j; ++i) xj = series_ops::mul(xj, x, order);
    if (disc.parameter == DiscParameter::X) {
      num = series_ops::scale(xj, pp);
      den = y;
    } else {
      PlaneModel m = plane_model(problem, precision);
      num = series_ops::scale(xj, pp * 2);
      den = series_ops::compose_poly(m.df, x, order);
    }
  } else {
    Coeffs one = constant_series(PadicNumber::integer(p, 1, precision), order);
    if (disc.parameter == DiscParameter::X) {
      Coeffs yy = series_ops::mul(y, y, order);
      if (j == 0) { num = series_ops::scale(one, pp); den = yy; }
      if (j == 1) { num = series_ops::scale(x, pp); den = yy; }
      if (j == 2) { num = series_ops::scale(one, pp); den = y; }
    } else {
      PlaneModel m = plane_model(problem, precision);
      den = series_ops::compose_poly(m.df, x, order);
      PadicNumber three_p = pp * 3;
      if (j == 0) num = series_ops::scale(one, three_p);
      if (j == 1) num = series_ops::scale(x, three_p);
      if (j == 2) num = series_ops::scale(y, three_p);
    }
  }
  Coeffs g = series_ops::mul(num, series_ops::inverse(den, order), order);
  return wrap(p, g, order + 1);
}

TruncatedSeries expand_differential_on_disc(const CurveProblem& problem, const LogDifferential& omega,
                                            const ResidueDisc& disc) {
  long p = problem.prime();
  TruncatedSeries sum;
  bool have = false;
  for (int j = 0; j < problem.basis_size(); ++j) {
    if (omega.coefficients[j].is_exact_zero()) continue;
    TruncatedSeries s = expand_differential_on_disc(problem, j, disc).scaled(omega.coefficients[j]);
    sum = have ? sum + s : s;
    have = true;
  }
  if (!have) return TruncatedSeries(p, {PadicNumber::exact_zero(p)});
  return sum;
}

TruncatedSeries expand_times_parameter_at_infinity(const CurveProblem& problem, int j, const ResidueDisc& disc) {
  long p = problem.prime();
  if (!problem.even_degree() || disc.parameter != DiscParameter::W)
    fail(ErrorCode::UnsupportedFamily, "Laurent expansion is only provided at infinity of the even model");
  // x^j dx/y = -w^(g-1-j) dw / z; with w = p t this is -p^(g-j) t^(g-j) dt / (t z)
  int order = disc.y.order();
  int e = problem.genus() - j;
  if (e < 0) fail(ErrorCode::ShapeMismatch, "basis index out of range");
  Coeffs w = disc.x.coefficients();
  Coeffs tw = constant_series(PadicNumber::integer(p, -1, disc.y.coefficient(0).precision()), order);
  for (int i = 0; i < e; ++i) tw = series_ops::mul(tw, w, order);
  Coeffs g = series_ops::mul(tw, series_ops::inverse(disc.y.coefficients(), order), order);
  return wrap(p, g, order);
}

}  // namespace achab
