#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "achab/padic.hpp"

namespace achab {

// Rational polynomial, coefficient of x^i at index i.
using RationalPoly = std::vector<mpq_class>;

namespace rpoly {
void trim(RationalPoly& f);
int degree(const RationalPoly& f);
RationalPoly mul(const RationalPoly& a, const RationalPoly& b);
RationalPoly add(const RationalPoly& a, const RationalPoly& b);
RationalPoly sub(const RationalPoly& a, const RationalPoly& b);
RationalPoly derivative(const RationalPoly& f);
// Division with remainder; divisor must be nonzero.
void divmod(const RationalPoly& a, const RationalPoly& b, RationalPoly& q, RationalPoly& r);
mpq_class eval(const RationalPoly& f, const mpq_class& x);
mpq_class resultant(const RationalPoly& a, const RationalPoly& b);
mpq_class discriminant(const RationalPoly& f);
// Number of distinct real roots (Sturm sequence).
int real_root_count(const RationalPoly& f);
RationalPoly parse(const std::vector<std::string>& coefficients);
}  // namespace rpoly

mpq_class parse_rational(const std::string& text);

struct NumberField {
  std::string name;
  RationalPoly minpoly;  // monic

  int degree() const { return rpoly::degree(minpoly); }
  // Real embeddings and pairs of complex embeddings.
  int real_places() const;
  int complex_places() const { return (degree() - real_places()) / 2; }

  static NumberField rationals();
};

// Element of Q[z]/(minpoly), as a polynomial in the generator z.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(const NumberField& field, RationalPoly coeffs);
  static FieldElement constant(const NumberField& field, const mpq_class& c);
  static FieldElement generator(const NumberField& field);

  const RationalPoly& coeffs() const { return coeffs_; }
  const RationalPoly& minpoly() const { return minpoly_; }
  bool is_zero() const { return coeffs_.empty(); }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement scaled(const mpq_class& c) const;
  FieldElement inverse() const;
  mpq_class norm() const;
  bool operator==(const FieldElement& o) const { return coeffs_ == o.coeffs_; }

  std::string to_string() const;

 private:
  RationalPoly minpoly_;
  RationalPoly coeffs_;
};

class FieldEmbedding {
 public:
  FieldEmbedding(NumberField field, PadicNumber root) : field_(std::move(field)), root_(std::move(root)) {}

  const NumberField& field() const { return field_; }
  const PadicNumber& root() const { return root_; }
  long prime() const { return root_.prime(); }
  int precision() const { return root_.precision(); }
  PadicNumber apply(const FieldElement& x) const;
  PadicNumber apply(const RationalPoly& coeffs) const;

 private:
  NumberField field_;
  PadicNumber root_;
};

// base^exponent in k^x tensor Q.
struct RationalPower {
  FieldElement base;
  mpq_class exponent = 1;
};

// One embedding per root of the minimal polynomial mod p, lifted to precision N.
std::vector<FieldEmbedding> hensel_embed(const NumberField& field, long p, int precision);
std::vector<FieldEmbedding> hensel_embed(const RationalPoly& minpoly, long p, int precision);

PadicNumber log_rational_power(const RationalPower& x, const FieldEmbedding& phi);

}  // namespace achab
