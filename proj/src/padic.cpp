#include "achab/padic.hpp"

#include <algorithm>
#include <deque>
#include <cctype>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace achab {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroInput: return "ZeroInput";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::NonSeparableReduction: return "NonSeparableReduction";
    case ErrorCode::PrimeMismatch: return "PrimeMismatch";
    case ErrorCode::DivergentSubstitution: return "DivergentSubstitution";
    case ErrorCode::IndistinguishableFromZero: return "IndistinguishableFromZero";
    case ErrorCode::PrecisionLoss: return "PrecisionLoss";
    case ErrorCode::PrecisionExceeded: return "PrecisionExceeded";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::BadReduction: return "BadReduction";
    case ErrorCode::PoleOnDisc: return "PoleOnDisc";
    case ErrorCode::DifferentDiscs: return "DifferentDiscs";
    case ErrorCode::EndpointRestriction: return "EndpointRestriction";
    case ErrorCode::MissingIncidence: return "MissingIncidence";
    case ErrorCode::NeedsOverride: return "NeedsOverride";
    case ErrorCode::NotTransversal: return "NotTransversal";
    case ErrorCode::InvalidProblem: return "InvalidProblem";
    case ErrorCode::NotOnCurve: return "NotOnCurve";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

const mpz_class& prime_power(long p, int k) {
  thread_local std::unordered_map<long, std::deque<mpz_class>> cache;
  auto& powers = cache[p];
  if (powers.empty()) powers.emplace_back(1);
  while (static_cast<int>(powers.size()) <= k) powers.push_back(powers.back() * p);
  return powers[k];
}

int valuation_of(const mpz_class& n, long p) {
  if (n == 0) fail(ErrorCode::ZeroInput, "valuation of zero");
  mpz_class rest = n;
  mpz_class prime(p);
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), prime.get_mpz_t()));
}

int valuation_of(const mpq_class& q, long p) {
  return valuation_of(q.get_num(), p) - valuation_of(q.get_den(), p);
}

PadicNumber PadicNumber::exact_zero(long p) {
  PadicNumber z;
  z.p_ = p;
  return z;
}

PadicNumber PadicNumber::zero(long p, int precision) {
  if (precision == kInfinity) return exact_zero(p);
  PadicNumber z;
  z.p_ = p;
  z.v_ = precision;
  z.n_ = precision;
  return z;
}

PadicNumber PadicNumber::from_parts(long p, int v, const mpz_class& u, int precision) {
  if (u == 0) return zero(p, precision);
  if (precision == kInfinity) fail(ErrorCode::PrecisionExceeded, "nonzero values need finite precision");
  PadicNumber x;
  x.p_ = p;
  x.u_ = u;
  mpz_class prime(p);
  x.v_ = v + static_cast<int>(mpz_remove(x.u_.get_mpz_t(), x.u_.get_mpz_t(), prime.get_mpz_t()));
  if (x.v_ >= precision) return zero(p, precision);
  x.n_ = precision;
  mpz_fdiv_r(x.u_.get_mpz_t(), x.u_.get_mpz_t(), prime_power(p, precision - x.v_).get_mpz_t());
  return x;
}

PadicNumber PadicNumber::integer(long p, const mpz_class& n, int precision) {
  return from_parts(p, 0, n, precision);
}

PadicNumber PadicNumber::rational(long p, const mpq_class& q, int precision) {
  if (q == 0) return zero(p, precision);
  int v = valuation_of(q, p);
  if (v >= precision) return zero(p, precision);
  mpz_class num = q.get_num(), den = q.get_den();
  mpz_class prime(p);
  mpz_remove(num.get_mpz_t(), num.get_mpz_t(), prime.get_mpz_t());
  mpz_remove(den.get_mpz_t(), den.get_mpz_t(), prime.get_mpz_t());
  const mpz_class& mod = prime_power(p, precision - v);
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  return from_parts(p, v, num * inv, precision);
}

void PadicNumber::check_prime(const PadicNumber& other) const {
  if (p_ != other.p_) fail(ErrorCode::PrimeMismatch, "mixing primes " + std::to_string(p_) + " and " + std::to_string(other.p_));
}

PadicNumber PadicNumber::truncated(int precision) const {
  if (precision >= n_) return *this;
  return from_parts(p_, is_zero() ? precision : v_, u_, precision);
}

PadicNumber PadicNumber::lifted(int precision) const {
  if (is_exact_zero() || precision <= n_) return *this;
  if (is_zero()) return zero(p_, precision);
  PadicNumber x = *this;
  x.n_ = precision;
  return x;
}

long PadicNumber::residue() const {
  if (v_ < 0) fail(ErrorCode::NotAUnit, "residue of a non-integral value");
  if (v_ > 0 || is_zero()) return 0;
  return mpz_fdiv_ui(u_.get_mpz_t(), p_);
}

mpz_class PadicNumber::to_integer() const {
  if (v_ < 0) fail(ErrorCode::NotAUnit, "integer representative of a non-integral value");
  if (is_zero()) return 0;
  return u_ * prime_power(p_, v_);
}

mpq_class PadicNumber::to_rational() const {
  if (is_zero()) return 0;
  if (v_ >= 0) return mpq_class(u_ * prime_power(p_, v_));
  mpq_class q(u_, prime_power(p_, -v_));
  q.canonicalize();
  return q;
}

PadicNumber PadicNumber::operator-() const {
  if (is_zero()) return *this;
  return from_parts(p_, v_, -u_, n_);
}

PadicNumber& PadicNumber::operator+=(const PadicNumber& other) {
  check_prime(other);
  if (other.is_exact_zero()) return *this;
  if (is_exact_zero()) return *this = other;
  int n = std::min(n_, other.n_);
  int v = std::min(v_, other.v_);
  if (v >= n) return *this = zero(p_, n);
  mpz_class u;
  if (!is_zero()) u += u_ * prime_power(p_, v_ - v);
  if (!other.is_zero()) u += other.u_ * prime_power(p_, other.v_ - v);
  return *this = from_parts(p_, v, u, n);
}

PadicNumber& PadicNumber::operator-=(const PadicNumber& other) { return *this += -other; }

PadicNumber& PadicNumber::operator*=(const PadicNumber& other) {
  check_prime(other);
  if (is_exact_zero()) return *this;
  if (other.is_exact_zero()) return *this = other;
  long n = std::min(static_cast<long>(v_) + other.n_, static_cast<long>(other.v_) + n_);
  if (is_zero() || other.is_zero()) return *this = zero(p_, static_cast<int>(n));
  return *this = from_parts(p_, v_ + other.v_, u_ * other.u_, static_cast<int>(n));
}

PadicNumber& PadicNumber::operator/=(const PadicNumber& other) {
  check_prime(other);
  if (other.is_zero()) fail(ErrorCode::ZeroInput, "division by a value indistinguishable from zero");
  if (is_exact_zero()) return *this;
  if (is_zero()) return *this = zero(p_, n_ - other.v_);
  return *this *= other.inverse();
}

PadicNumber PadicNumber::inverse() const {
  if (is_zero()) fail(ErrorCode::ZeroInput, "inverse of a value indistinguishable from zero");
  int rel = n_ - v_;
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), u_.get_mpz_t(), prime_power(p_, rel).get_mpz_t());
  return from_parts(p_, -v_, inv, -v_ + rel);
}

PadicNumber PadicNumber::scaled(const mpz_class& k) const {
  if (k == 0) return exact_zero(p_);
  if (is_exact_zero()) return *this;
  int w = valuation_of(k, p_);
  if (is_zero()) return zero(p_, n_ + w);
  return from_parts(p_, v_, u_ * k, n_ + w);
}

PadicNumber PadicNumber::divided(const mpz_class& k) const {
  if (k == 0) fail(ErrorCode::ZeroInput, "division by zero");
  return scaled(mpq_class(mpz_class(1), k));
}

PadicNumber PadicNumber::scaled(const mpq_class& q) const {
  if (q == 0) return exact_zero(p_);
  if (is_exact_zero()) return *this;
  int w = valuation_of(q, p_);
  if (is_zero()) return zero(p_, n_ + w);
  mpz_class num = q.get_num(), den = q.get_den();
  mpz_class prime(p_);
  mpz_remove(num.get_mpz_t(), num.get_mpz_t(), prime.get_mpz_t());
  mpz_remove(den.get_mpz_t(), den.get_mpz_t(), prime.get_mpz_t());
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), prime_power(p_, n_ - v_).get_mpz_t());
  return from_parts(p_, v_ + w, u_ * num * inv, n_ + w);
}

PadicNumber PadicNumber::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  if (e == 0) return integer(p_, 1, is_exact_zero() ? kInfinity : relative_precision());
  PadicNumber result;
  PadicNumber base = *this;
  bool have = false;
  while (e > 0) {
    if (e & 1) {
      result = have ? result * base : base;
      have = true;
    }
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

namespace {

std::string power_term(const std::string& digit, long p, int k) {
  std::string base = std::to_string(p);
  std::string pw = k == 0 ? "" : (k == 1 ? base : base + "^" + std::to_string(k));
  if (pw.empty()) return digit;
  if (digit == "1") return pw;
  return digit + "*" + pw;
}

}  // namespace

std::string PadicNumber::to_string() const {
  if (is_exact_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  if (!is_zero()) {
    mpz_class rest = u_;
    for (int k = v_; k < n_ && rest != 0; ++k) {
      unsigned long digit = mpz_fdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(), p_);
      if (digit == 0) continue;
      if (!first) out << " + ";
      out << power_term(std::to_string(digit), p_, k);
      first = false;
    }
  }
  if (!first) out << " + ";
  out << "O(" << p_ << "^" << n_ << ")";
  return out.str();
}

std::ostream& operator<<(std::ostream& os, const PadicNumber& x) { return os << x.to_string(); }

namespace {

std::string strip(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Accepts "*" or the middle dot as multiplication sign.
std::string normalize_operators(const std::string& text) {
  std::string out;
  for (size_t i = 0; i < text.size(); ++i) {
    unsigned char c = text[i];
    if (c == 0xC2 && i + 1 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0xB7) {
      out += '*';
      ++i;
    } else if (c == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x8B &&
               static_cast<unsigned char>(text[i + 2]) == 0x85) {
      out += '*';
      i += 2;
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

long parse_long(const std::string& s, const std::string& context) {
  try {
    size_t used = 0;
    long value = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "bad integer '" + s + "' in '" + context + "'");
  }
}

// Parses "p", "p^k" into k after checking the base.
int parse_power(const std::string& s, long p, const std::string& context) {
  auto caret = s.find('^');
  long base = parse_long(strip(s.substr(0, caret)), context);
  if (base != p) fail(ErrorCode::ParseError, "unexpected base in '" + context + "'");
  if (caret == std::string::npos) return 1;
  return static_cast<int>(parse_long(strip(s.substr(caret + 1)), context));
}

}  // namespace

PadicNumber PadicNumber::parse(const std::string& raw, long p, int default_precision) {
  std::string text = normalize_operators(raw);
  if (strip(text) == "0") return exact_zero(p);
  std::vector<std::string> terms;
  std::string current;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == '+' || c == '-') && depth == 0 && !strip(current).empty() && strip(current).back() != '^') {
      terms.push_back(strip(current));
      current.clear();
      if (c == '-') current = "-";
      continue;
    }
    current += c;
  }
  if (!strip(current).empty()) terms.push_back(strip(current));

  int precision = default_precision;
  bool explicit_precision = false;
  mpq_class value = 0;
  for (const auto& term : terms) {
    if (term.rfind("O(", 0) == 0) {
      if (term.back() != ')') fail(ErrorCode::ParseError, "unterminated O-term in '" + raw + "'");
      precision = parse_power(term.substr(2, term.size() - 3), p, raw);
      explicit_precision = true;
      continue;
    }
    auto star = term.find('*');
    mpq_class coeff = 1;
    int k = 0;
    if (star == std::string::npos) {
      if (term.find('^') != std::string::npos) {
        k = parse_power(term, p, raw);
      } else {
        coeff = mpq_class(parse_long(term, raw));
      }
    } else {
      coeff = mpq_class(parse_long(strip(term.substr(0, star)), raw));
      k = parse_power(strip(term.substr(star + 1)), p, raw);
    }
    if (k >= 0) {
      value += coeff * mpq_class(prime_power(p, k));
    } else {
      value += coeff / mpq_class(prime_power(p, -k));
    }
  }
  if (!explicit_precision && value == 0) return exact_zero(p);
  return rational(p, value, precision);
}

PadicNumber operator+(PadicNumber a, const PadicNumber& b) { return a += b; }
PadicNumber operator-(PadicNumber a, const PadicNumber& b) { return a -= b; }
PadicNumber operator*(PadicNumber a, const PadicNumber& b) { return a *= b; }
PadicNumber operator/(PadicNumber a, const PadicNumber& b) { return a /= b; }
PadicNumber operator*(const PadicNumber& a, long k) { return a.scaled(mpz_class(k)); }
PadicNumber operator*(long k, const PadicNumber& a) { return a.scaled(mpz_class(k)); }
PadicNumber operator+(const PadicNumber& a, long k) {
  return a + PadicNumber::integer(a.prime(), k, std::max(a.precision(), 1));
}
PadicNumber operator-(const PadicNumber& a, long k) { return a + (-k); }

Comparison compare(const PadicNumber& a, const PadicNumber& b) {
  if (a.prime() != b.prime()) return Comparison::Distinct;
  if (a.is_exact_zero() && b.is_exact_zero()) return Comparison::Equal;
  PadicNumber d = a - b;
  return d.is_zero() ? Comparison::Indistinguishable : Comparison::Distinct;
}

PadicNumber iwasawa_log(const PadicNumber& x) {
  if (x.is_zero()) fail(ErrorCode::ZeroInput, "log of a value indistinguishable from zero");
  long p = x.prime();
  int r = x.relative_precision();
  const mpz_class& mod = prime_power(p, r);
  // u^(p-1) (or u^2 when p = 2) is a principal unit with the same log up to the factor.
  long e = p == 2 ? 2 : p - 1;
  mpz_class w;
  mpz_powm_ui(w.get_mpz_t(), x.unit().get_mpz_t(), e, mod.get_mpz_t());
  PadicNumber z = PadicNumber::from_parts(p, 0, w - 1, r);
  if (z.is_zero()) return PadicNumber::zero(p, r);
  PadicNumber sum = PadicNumber::zero(p, r);
  PadicNumber term = z;
  int vz = z.valuation();
  for (long k = 1;; ++k) {
    // valuation of z^k/k is at least k*vz - log_p(k)
    long kp = k, lg = 0;
    while (kp >= p) {
      kp /= p;
      ++lg;
    }
    if (k * vz - lg >= r) break;
    PadicNumber t = term.divided(mpz_class(k));
    if (k % 2 == 0) t = -t;
    sum += t;
    term *= z;
  }
  return sum.divided(mpz_class(e)).truncated(r);
}

PadicNumber teichmuller(const PadicNumber& x, int precision) {
  if (!x.is_unit()) fail(ErrorCode::NotAUnit, "teichmuller lift needs a unit");
  long p = x.prime();
  int n = precision > 0 ? precision : x.precision();
  const mpz_class& mod = prime_power(p, n);
  mpz_class w(x.residue());
  // w^(p^(n-1)) converges to the root of unity
  for (int i = 1; i < n; ++i) mpz_powm_ui(w.get_mpz_t(), w.get_mpz_t(), p, mod.get_mpz_t());
  return PadicNumber::integer(p, w, n);
}

mpz_class hensel_lift(const std::vector<mpz_class>& poly, long root_mod_p, long p, int precision) {
  auto eval = [&](const mpz_class& x, const mpz_class& mod, bool derivative) {
    mpz_class acc = 0;
    for (size_t i = poly.size(); i-- > 0;) {
      if (derivative) {
        if (i == 0) break;
        acc = acc * x + poly[i] * static_cast<long>(i);
      } else {
        acc = acc * x + poly[i];
      }
      mpz_fdiv_r(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
    }
    return acc;
  };
  mpz_class r(root_mod_p);
  if (eval(r, prime_power(p, 1), false) != 0) fail(ErrorCode::NotAUnit, "not a root mod p");
  if (eval(r, prime_power(p, 1), true) == 0) fail(ErrorCode::NonSeparableReduction, "root mod p is not simple");
  int have = 1;
  while (have < precision) {
    have = std::min(2 * have, precision);
    const mpz_class& mod = prime_power(p, have);
    mpz_class fr = eval(r, mod, false);
    mpz_class dr = eval(r, mod, true);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), dr.get_mpz_t(), mod.get_mpz_t());
    r -= fr * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  }
  return r;
}

PadicNumber padic_sqrt(const PadicNumber& x, long root_mod_p) {
  long p = x.prime();
  if (x.is_exact_zero()) return x;
  if (x.is_zero()) return PadicNumber::zero(p, x.precision() / 2);
  if (x.valuation() % 2 != 0) fail(ErrorCode::NotAUnit, "odd valuation has no square root");
  if (p == 2) fail(ErrorCode::UnsupportedFamily, "square roots at p = 2 are not supported");
  int r = x.relative_precision();
  long a = mpz_fdiv_ui(x.unit().get_mpz_t(), p);
  long root = -1;
  if (root_mod_p >= 0) {
    long s = root_mod_p % p;
    if ((s * s - a) % p == 0) root = s;
  } else {
    for (long s = 1; s < p; ++s) {
      if ((s * s - a) % p == 0) {
        root = s;
        break;
      }
    }
  }
  if (root < 0) fail(ErrorCode::NotAUnit, "no square root mod p");
  std::vector<mpz_class> poly{-x.unit(), 0, 1};
  mpz_class y = hensel_lift(poly, root, p, r);
  return PadicNumber::from_parts(p, x.valuation() / 2, y, x.valuation() / 2 + r);
}

}  // namespace achab
