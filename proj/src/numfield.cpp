#include "achab/numfield.hpp"

#include <algorithm>
#include <sstream>

namespace achab {

mpq_class parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  mpq_class q;
  if (s.empty() || q.set_str(s, 10) != 0) fail(ErrorCode::ParseError, "bad rational '" + text + "'");
  q.canonicalize();
  if (q.get_den() == 0) fail(ErrorCode::ParseError, "zero denominator in '" + text + "'");
  return q;
}

namespace rpoly {

void trim(RationalPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const RationalPoly& f) {
  for (size_t i = f.size(); i-- > 0;)
    if (f[i] != 0) return static_cast<int>(i);
  return -1;
}

RationalPoly mul(const RationalPoly& a, const RationalPoly& b) {
  if (a.empty() || b.empty()) return {};
  RationalPoly c(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  trim(c);
  return c;
}

RationalPoly add(const RationalPoly& a, const RationalPoly& b) {
  RationalPoly c(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  trim(c);
  return c;
}

RationalPoly sub(const RationalPoly& a, const RationalPoly& b) {
  RationalPoly c(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
  trim(c);
  return c;
}

RationalPoly derivative(const RationalPoly& f) {
  RationalPoly d;
  for (size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<long>(i));
  trim(d);
  return d;
}

void divmod(const RationalPoly& a, const RationalPoly& b, RationalPoly& q, RationalPoly& r) {
  int db = degree(b);
  if (db < 0) fail(ErrorCode::ZeroInput, "polynomial division by zero");
  r = a;
  trim(r);
  q.assign(std::max<int>(0, degree(r) - db + 1), 0);
  while (degree(r) >= db) {
    int dr = degree(r);
    mpq_class c = r[dr] / b[db];
    q[dr - db] = c;
    for (int i = 0; i <= db; ++i) r[dr - db + i] -= c * b[i];
    trim(r);
  }
  trim(q);
}

mpq_class eval(const RationalPoly& f, const mpq_class& x) {
  mpq_class acc = 0;
  for (size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
  return acc;
}

namespace {

mpq_class determinant(std::vector<std::vector<mpq_class>> m) {
  size_t n = m.size();
  mpq_class det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      mpq_class factor = m[r][c] / m[c][c];
      for (size_t k = c; k < n; ++k) m[r][k] -= factor * m[c][k];
    }
  }
  return det;
}

}  // namespace

mpq_class resultant(const RationalPoly& a, const RationalPoly& b) {
  int m = degree(a), n = degree(b);
  if (m < 0 || n < 0) return 0;
  mpq_class r = 1;
  if (m == 0) {
    for (int i = 0; i < n; ++i) r *= a[0];
    return r;
  }
  if (n == 0) {
    for (int i = 0; i < m; ++i) r *= b[0];
    return r;
  }
  size_t size = m + n;
  std::vector<std::vector<mpq_class>> s(size, std::vector<mpq_class>(size, 0));
  for (int row = 0; row < n; ++row)
    for (int i = 0; i <= m; ++i) s[row][row + i] = a[m - i];
  for (int row = 0; row < m; ++row)
    for (int i = 0; i <= n; ++i) s[n + row][row + i] = b[n - i];
  return determinant(std::move(s));
}

mpq_class discriminant(const RationalPoly& f) {
  int n = degree(f);
  mpq_class r = resultant(f, derivative(f)) / f[n];
  if ((n * (n - 1) / 2) % 2 == 1) r = -r;
  return r;
}

int real_root_count(const RationalPoly& f) {
  RationalPoly g = f;
  trim(g);
  if (degree(g) <= 0) return 0;
  std::vector<RationalPoly> seq{g, derivative(g)};
  while (degree(seq.back()) > 0) {
    RationalPoly q, r;
    divmod(seq[seq.size() - 2], seq.back(), q, r);
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    seq.push_back(r);
  }
  // sign changes at -inf and +inf from leading terms
  auto changes = [&](bool plus) {
    int count = 0, last = 0;
    for (const auto& h : seq) {
      int d = degree(h);
      if (d < 0) continue;
      int s = sgn(h[d]);
      if (!plus && d % 2 == 1) s = -s;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  };
  return changes(false) - changes(true);
}

RationalPoly parse(const std::vector<std::string>& coefficients) {
  RationalPoly f;
  for (const auto& c : coefficients) f.push_back(parse_rational(c));
  trim(f);
  return f;
}

}  // namespace rpoly

NumberField NumberField::rationals() { return NumberField{"Q", {mpq_class(0), mpq_class(1)}}; }

int NumberField::real_places() const { return rpoly::real_root_count(minpoly); }

FieldElement::FieldElement(const NumberField& field, RationalPoly coeffs) : minpoly_(field.minpoly) {
  RationalPoly q;
  rpoly::divmod(coeffs, minpoly_, q, coeffs_);
}

FieldElement FieldElement::constant(const NumberField& field, const mpq_class& c) { return FieldElement(field, {c}); }

FieldElement FieldElement::generator(const NumberField& field) {
  return FieldElement(field, {mpq_class(0), mpq_class(1)});
}

namespace {

FieldElement make(const RationalPoly& minpoly, RationalPoly coeffs) {
  return FieldElement(NumberField{"", minpoly}, std::move(coeffs));
}

}  // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const { return make(minpoly_, rpoly::add(coeffs_, o.coeffs_)); }
FieldElement FieldElement::operator-(const FieldElement& o) const { return make(minpoly_, rpoly::sub(coeffs_, o.coeffs_)); }
FieldElement FieldElement::operator*(const FieldElement& o) const { return make(minpoly_, rpoly::mul(coeffs_, o.coeffs_)); }
FieldElement FieldElement::operator-() const { return make(minpoly_, rpoly::sub({}, coeffs_)); }

FieldElement FieldElement::scaled(const mpq_class& c) const { return make(minpoly_, rpoly::mul(coeffs_, {c})); }

FieldElement FieldElement::inverse() const {
  if (is_zero()) fail(ErrorCode::ZeroInput, "inverse of zero field element");
  // extended Euclid: s*coeffs + t*minpoly = gcd
  RationalPoly r0 = minpoly_, r1 = coeffs_;
  RationalPoly s0{}, s1{mpq_class(1)};
  while (rpoly::degree(r1) > 0) {
    RationalPoly q, r;
    rpoly::divmod(r0, r1, q, r);
    RationalPoly s = rpoly::sub(s0, rpoly::mul(q, s1));
    r0 = r1;
    r1 = r;
    s0 = s1;
    s1 = s;
  }
  if (rpoly::degree(r1) < 0) fail(ErrorCode::ZeroInput, "element is a zero divisor");
  return make(minpoly_, rpoly::mul(s1, {1 / r1[0]}));
}

mpq_class FieldElement::norm() const {
  if (is_zero()) return 0;
  return rpoly::resultant(minpoly_, coeffs_);
}

std::string FieldElement::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!first) out << " + ";
    out << coeffs_[i].get_str();
    if (i == 1) out << "*z";
    if (i > 1) out << "*z^" << i;
    first = false;
  }
  return out.str();
}

PadicNumber FieldEmbedding::apply(const RationalPoly& coeffs) const {
  long p = prime();
  PadicNumber acc = PadicNumber::exact_zero(p);
  for (size_t i = coeffs.size(); i-- > 0;) {
    acc = acc * root_ + PadicNumber::rational(p, coeffs[i], root_.precision());
  }
  return acc;
}

PadicNumber FieldEmbedding::apply(const FieldElement& x) const { return apply(x.coeffs()); }

std::vector<FieldEmbedding> hensel_embed(const RationalPoly& minpoly, long p, int precision) {
  NumberField field{"", minpoly};
  return hensel_embed(field, p, precision);
}

std::vector<FieldEmbedding> hensel_embed(const NumberField& field, long p, int precision) {
  const RationalPoly& m = field.minpoly;
  int d = rpoly::degree(m);
  if (d < 1) fail(ErrorCode::InvalidProblem, "minimal polynomial must have positive degree");
  for (const auto& c : m)
    if (c != 0 && valuation_of(c, p) < 0) fail(ErrorCode::NonSeparableReduction, "minimal polynomial is not p-integral");
  if (d > 1 && valuation_of(rpoly::discriminant(m), p) > 0)
    fail(ErrorCode::NonSeparableReduction, "minimal polynomial has repeated roots mod " + std::to_string(p));
  std::vector<mpz_class> integral;
  const mpz_class& mod = prime_power(p, precision);
  for (const auto& c : m) integral.push_back(PadicNumber::rational(p, c, precision).lifted(precision).to_integer() % mod);
  std::vector<FieldEmbedding> out;
  for (long r = 0; r < p; ++r) {
    mpz_class acc = 0;
    for (size_t i = integral.size(); i-- > 0;) acc = (acc * r + integral[i]) % p;
    if (acc != 0) continue;
    mpz_class root = hensel_lift(integral, r, p, precision);
    out.emplace_back(field, PadicNumber::integer(p, root, precision));
  }
  return out;
}

PadicNumber log_rational_power(const RationalPower& x, const FieldEmbedding& phi) {
  return iwasawa_log(phi.apply(x.base)).scaled(x.exponent);
}

}  // namespace achab
