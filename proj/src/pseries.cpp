#include "achab/pseries.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace achab {

namespace {

constexpr double kHuge = 1e18;

double coefficient_bound(const PadicNumber& c) {
  if (c.is_exact_zero()) return kHuge;
  return c.valuation();
}

int floor_to_int(double x) {
  if (x >= kHuge / 2) return PadicNumber::kInfinity;
  return static_cast<int>(std::floor(x + 1e-9));
}

// Window used to turn pointwise coefficient bounds into a linear tail bound.
int tail_from_bounds(int order, double slope, const std::function<double(int)>& bound) {
  double best = kHuge;
  int window = 2 * order + 16;
  for (int k = order; k < order + window; ++k) best = std::min(best, bound(k) - slope * (k - order));
  return floor_to_int(best);
}

std::string digits_only(const PadicNumber& x) {
  std::string s = x.to_string();
  auto pos = s.rfind("O(");
  if (pos == std::string::npos) return s;
  std::string head = s.substr(0, pos);
  while (!head.empty() && (head.back() == ' ' || head.back() == '+')) head.pop_back();
  return head;
}

}  // namespace

TruncatedSeries::TruncatedSeries(long p, std::vector<PadicNumber> coeffs, int tail_valuation, double tail_slope)
    : p_(p), c_(std::move(coeffs)), tail_(tail_valuation), slope_(tail_slope) {
  for (const auto& c : c_)
    if (c.prime() != p_) fail(ErrorCode::PrimeMismatch, "series coefficient over a different prime");
}

TruncatedSeries TruncatedSeries::monomial(long p, int degree, const PadicNumber& c, int order) {
  std::vector<PadicNumber> coeffs(std::max(order, degree + 1), PadicNumber::exact_zero(p));
  coeffs[degree] = c;
  return TruncatedSeries(p, std::move(coeffs));
}

const PadicNumber& TruncatedSeries::coefficient(int n) const {
  if (n < 0 || n >= order()) fail(ErrorCode::ShapeMismatch, "coefficient index " + std::to_string(n) + " beyond truncation order");
  return c_[n];
}

void TruncatedSeries::set_tail(int tail_valuation, double tail_slope) {
  tail_ = tail_valuation;
  slope_ = tail_slope;
}

double TruncatedSeries::valuation_bound(int n) const {
  if (n < order()) return coefficient_bound(c_[n]);
  if (tail_ == PadicNumber::kInfinity) return kHuge;
  if (tail_ == kUnbounded) return -kHuge;
  return tail_ + slope_ * (n - order());
}

int TruncatedSeries::value_precision() const {
  int prec = tail_;
  if (tail_ != PadicNumber::kInfinity && slope_ < 0) prec = kUnbounded;
  for (const auto& c : c_) prec = std::min(prec, c.precision());
  return prec;
}

PadicNumber TruncatedSeries::evaluate(const PadicNumber& t) const {
  if (t.prime() != p_) fail(ErrorCode::PrimeMismatch, "evaluation point over a different prime");
  if (!t.is_zero() && t.valuation() < 0) fail(ErrorCode::DivergentSubstitution, "evaluation outside the closed unit disc");
  if (tail_ == kUnbounded || (tail_ != PadicNumber::kInfinity && slope_ < 0))
    fail(ErrorCode::PrecisionLoss, "series tail is not bounded on the unit disc");
  PadicNumber acc = PadicNumber::exact_zero(p_);
  for (size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i];
  return acc.truncated(tail_);
}

TruncatedSeries TruncatedSeries::derivative() const {
  std::vector<PadicNumber> d;
  for (int n = 1; n < order(); ++n) d.push_back(c_[n].scaled(mpz_class(n)));
  if (d.empty()) d.push_back(PadicNumber::exact_zero(p_));
  TruncatedSeries out(p_, std::move(d));
  if (is_polynomial()) return out;
  // n * c_n with n >= T: valuation only grows
  out.set_tail(tail_, slope_);
  return out;
}

TruncatedSeries TruncatedSeries::truncated(int new_order) const {
  if (new_order >= order()) return *this;
  std::vector<PadicNumber> c(c_.begin(), c_.begin() + new_order);
  TruncatedSeries out(p_, std::move(c));
  double slope = is_polynomial() ? 0.0 : slope_;
  out.set_tail(tail_from_bounds(new_order, slope, [this](int k) { return valuation_bound(k); }), slope);
  return out;
}

TruncatedSeries TruncatedSeries::scaled(const PadicNumber& c) const {
  std::vector<PadicNumber> out;
  for (const auto& x : c_) out.push_back(x * c);
  TruncatedSeries s(p_, std::move(out));
  if (is_polynomial() || c.is_exact_zero()) return s;
  s.set_tail(tail_ == kUnbounded ? kUnbounded : tail_ + c.valuation(), slope_);
  return s;
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  if (p_ != o.p_) fail(ErrorCode::PrimeMismatch, "adding series over different primes");
  int n;
  if (is_polynomial() && o.is_polynomial()) {
    n = std::max(order(), o.order());
  } else if (is_polynomial()) {
    n = o.order();
  } else if (o.is_polynomial()) {
    n = order();
  } else {
    n = std::min(order(), o.order());
  }
  std::vector<PadicNumber> c(n, PadicNumber::exact_zero(p_));
  for (int i = 0; i < n; ++i) {
    if (i < order()) c[i] += c_[i];
    if (i < o.order()) c[i] += o.c_[i];
  }
  TruncatedSeries out(p_, std::move(c));
  if (is_polynomial() && o.is_polynomial()) return out;
  double slope = std::min(is_polynomial() ? kHuge : slope_, o.is_polynomial() ? kHuge : o.slope_);
  out.set_tail(tail_from_bounds(n, slope, [&](int k) { return std::min(valuation_bound(k), o.valuation_bound(k)); }), slope);
  return out;
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
  TruncatedSeries neg = o;
  for (auto& c : neg.c_) c = -c;
  return *this + neg;
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  if (p_ != o.p_) fail(ErrorCode::PrimeMismatch, "multiplying series over different primes");
  int n;
  if (is_polynomial() && o.is_polynomial()) {
    n = order() + o.order() - 1;
  } else if (is_polynomial()) {
    n = o.order();
  } else if (o.is_polynomial()) {
    n = order();
  } else {
    n = std::min(order(), o.order());
  }
  std::vector<PadicNumber> c(n, PadicNumber::exact_zero(p_));
  for (int i = 0; i < std::min(n, order()); ++i) {
    if (c_[i].is_exact_zero()) continue;
    for (int j = 0; j < o.order() && i + j < n; ++j) c[i + j] += c_[i] * o.c_[j];
  }
  TruncatedSeries out(p_, std::move(c));
  if (is_polynomial() && o.is_polynomial()) return out;
  double slope = std::min(is_polynomial() ? kHuge : slope_, o.is_polynomial() ? kHuge : o.slope_);
  auto bound = [&](int k) {
    double best = kHuge;
    for (int i = 0; i <= k; ++i) best = std::min(best, valuation_bound(i) + o.valuation_bound(k - i));
    return best;
  };
  out.set_tail(tail_from_bounds(n, slope, bound), slope);
  return out;
}

std::string TruncatedSeries::to_string(int digits, int terms) const {
  int shown = terms < 0 ? order() : std::min(terms, order());
  std::ostringstream out;
  bool first = true;
  for (int n = 0; n < shown; ++n) {
    PadicNumber c = c_[n].truncated(digits);
    if (c.is_zero()) continue;
    if (!first) out << " + ";
    std::string body = digits_only(c);
    bool compound = body.find(' ') != std::string::npos;
    if (n == 0) {
      out << body;
    } else {
      out << (compound || body.find('*') != std::string::npos ? "(" + body + ")" : body);
      out << "t";
      if (n > 1) out << "^" << n;
    }
    first = false;
  }
  if (!first) out << " + ";
  out << "O(" << p_ << "^" << digits << ", t^" << shown << ")";
  return out.str();
}

TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& g) {
  long p = f.prime();
  if (g.prime() != p) fail(ErrorCode::PrimeMismatch, "composing series over different primes");
  const PadicNumber& g0 = g.coefficient(0);
  if (!g0.is_zero() && g0.valuation() < 1)
    fail(ErrorCode::DivergentSubstitution, "inner series must have constant term of positive valuation");

  int n;
  bool exact = f.is_polynomial() && g.is_polynomial();
  if (exact) {
    n = (f.order() - 1) * (g.order() - 1) + 1;
  } else if (f.is_polynomial()) {
    n = g.order();
  } else if (g.is_polynomial()) {
    n = f.order();
  } else {
    n = std::min(f.order(), g.order());
  }
  std::vector<PadicNumber> h(n, PadicNumber::exact_zero(p));
  std::vector<PadicNumber> power(n, PadicNumber::exact_zero(p));
  int g_order = g.order();
  for (int j = 0; j < std::min(n, g_order); ++j) power[j] = g.coefficient(j);
  h[0] = f.coefficient(0);
  for (int k = 1; k < f.order(); ++k) {
    if (k > 1) {
      std::vector<PadicNumber> next(n, PadicNumber::exact_zero(p));
      for (int i = 0; i < n; ++i) {
        if (power[i].is_exact_zero()) continue;
        for (int j = 0; j < g_order && i + j < n; ++j) next[i + j] += power[i] * g.coefficient(j);
      }
      power = std::move(next);
    }
    const PadicNumber& fk = f.coefficient(k);
    if (fk.is_exact_zero()) continue;
    for (int i = 0; i < n; ++i) h[i] += fk * power[i];
  }
  double g0_val = g0.is_exact_zero() ? kHuge : g0.valuation();
  if (!f.is_polynomial() && g0_val < kHuge / 2) {
    // tail terms of f reach coefficient k through powers of g0
    for (int k = 0; k < n; ++k) {
      double cap = f.tail_valuation() + g0_val * std::max(0, f.order() - k);
      h[k] = h[k].truncated(floor_to_int(cap));
    }
  }
  TruncatedSeries out(p, std::move(h));
  if (exact) return out;
  double gmin = kHuge;
  for (int j = 0; j < 4 * g_order + 16; ++j) gmin = std::min(gmin, g.valuation_bound(j));
  if (gmin < 0) {
    out.set_tail(TruncatedSeries::kUnbounded, 0.0);
    return out;
  }
  double best = kHuge;
  for (int k = 1; k < f.order(); ++k) best = std::min(best, f.valuation_bound(k) + gmin * k);
  if (!f.is_polynomial()) best = std::min(best, f.tail_valuation() + gmin * f.order());
  out.set_tail(floor_to_int(best), 0.0);
  return out;
}

TruncatedSeries formal_antiderivative(const TruncatedSeries& f) {
  long p = f.prime();
  if (f.order() < 1) fail(ErrorCode::ShapeMismatch, "antiderivative of an empty series");
  std::vector<PadicNumber> c;
  c.push_back(PadicNumber::exact_zero(p));
  for (int n = 0; n < f.order(); ++n) c.push_back(f.coefficient(n).divided(mpz_class(n + 1)));
  TruncatedSeries out(p, std::move(c));
  if (f.is_polynomial()) return out;
  if (f.tail_valuation() == TruncatedSeries::kUnbounded) {
    out.set_tail(TruncatedSeries::kUnbounded, 0.0);
    return out;
  }
  int t = f.order();
  double lg = std::log(static_cast<double>(t + 1)) / std::log(static_cast<double>(p));
  double slope = f.tail_slope() - 1.0 / ((t + 1) * std::log(static_cast<double>(p)));
  out.set_tail(floor_to_int(f.tail_valuation() - lg), slope);
  return out;
}

int strassmann_bound(const TruncatedSeries& f) {
  double best = kHuge;
  int index = -1;
  for (int n = 0; n < f.order(); ++n) {
    const PadicNumber& c = f.coefficient(n);
    if (c.is_zero()) continue;
    if (c.valuation() <= best) {
      best = c.valuation();
      index = n;
    }
  }
  if (index < 0) fail(ErrorCode::IndistinguishableFromZero, "all coefficients vanish to precision");
  for (int n = index + 1; n < f.order(); ++n) {
    const PadicNumber& c = f.coefficient(n);
    if (c.is_zero() && !c.is_exact_zero() && c.precision() <= best)
      fail(ErrorCode::PrecisionLoss, "coefficient " + std::to_string(n) + " is not known well enough to bound roots");
  }
  if (!f.is_polynomial()) {
    if (f.tail_valuation() == TruncatedSeries::kUnbounded || f.tail_slope() < 0 || f.tail_valuation() <= best)
      fail(ErrorCode::PrecisionLoss, "series tail may dominate the known coefficients");
  }
  return index;
}

namespace {

// g(s) = f(a + p s)
TruncatedSeries shift(const TruncatedSeries& f, long a) {
  long p = f.prime();
  int order = f.order();
  std::vector<PadicNumber> g(order, PadicNumber::exact_zero(p));
  for (int n = 0; n < order; ++n) {
    const PadicNumber& fn = f.coefficient(n);
    if (fn.is_exact_zero()) continue;
    mpz_class binom = 1;
    mpz_class apow = 1;
    // coefficient k collects C(n,k) a^(n-k) p^k f_n
    std::vector<mpz_class> apowers(n + 1);
    apowers[0] = 1;
    for (int i = 1; i <= n; ++i) apowers[i] = apowers[i - 1] * a;
    for (int k = 0; k <= n; ++k) {
      if (k > 0) binom = binom * (n - k + 1) / k;
      mpz_class factor = binom * apowers[n - k] * prime_power(p, k);
      if (factor == 0) continue;
      g[k] += fn.scaled(factor);
    }
  }
  TruncatedSeries out(p, std::move(g));
  if (f.is_polynomial()) return out;
  if (f.tail_valuation() == TruncatedSeries::kUnbounded) {
    out.set_tail(TruncatedSeries::kUnbounded, 0.0);
    return out;
  }
  std::vector<PadicNumber> capped = out.coefficients();
  for (int k = 0; k < order; ++k) capped[k] = capped[k].truncated(f.tail_valuation() + k);
  TruncatedSeries result(p, std::move(capped));
  result.set_tail(f.tail_valuation() + order, f.tail_slope() + 1.0);
  return result;
}

PadicNumber newton_root(const TruncatedSeries& g) {
  long p = g.prime();
  TruncatedSeries dg = g.derivative();
  PadicNumber s = PadicNumber::zero(p, std::max(1, g.value_precision()));
  for (int iter = 0; iter < 200; ++iter) {
    PadicNumber val = g.evaluate(s);
    if (val.is_zero()) break;
    PadicNumber der = dg.evaluate(s);
    PadicNumber step = val / der;
    s -= step;
    if (step.is_zero()) break;
  }
  return s;
}

void isolate(const TruncatedSeries& f, const PadicNumber& offset, int k, int limit, std::vector<SeriesRoot>& out) {
  int b = strassmann_bound(f);
  if (b == 0) return;
  long p = f.prime();
  if (b == 1) {
    PadicNumber s = newton_root(f);
    out.push_back({offset + s.scaled(prime_power(p, k)), 1});
    return;
  }
  if (k >= limit) fail(ErrorCode::PrecisionLoss, "root cannot be certified simple at working precision");
  for (long a = 0; a < p; ++a) {
    TruncatedSeries g = shift(f, a);
    isolate(g, offset + PadicNumber::integer(p, mpz_class(a) * prime_power(p, k), limit + k + 1), k + 1, limit, out);
  }
}

}  // namespace

RootIsolation strassmann_roots(const TruncatedSeries& f) {
  RootIsolation result;
  result.bound = strassmann_bound(f);
  int limit = f.value_precision();
  if (limit == TruncatedSeries::kUnbounded || limit == PadicNumber::kInfinity) limit = 64;
  isolate(f, PadicNumber::exact_zero(f.prime()), 0, limit, result.roots);
  if (static_cast<int>(result.roots.size()) > result.bound)
    fail(ErrorCode::PrecisionLoss, "more roots isolated than the Strassmann bound allows");
  return result;
}

}  // namespace achab
