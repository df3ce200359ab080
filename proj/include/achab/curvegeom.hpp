#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "achab/numfield.hpp"
#include "achab/padic.hpp"
#include "achab/pseries.hpp"

namespace achab {

enum class CurveFamily { Hyperelliptic, SuperellipticCubic };

struct RationalPoint {
  mpq_class x;
  mpq_class y;
  bool operator==(const RationalPoint& o) const { return x == o.x && y == o.y; }
};

std::string to_string(const RationalPoint& pt);

// Point with coordinates in Q_p on the affine model; `infinite` marks the
// point at infinity of an odd-degree hyperelliptic model.
struct PadicPoint {
  PadicNumber x;
  PadicNumber y;
  bool infinite = false;
};

PadicPoint to_padic(const RationalPoint& pt, long p, int precision);

struct Cusp {
  std::string id;
  NumberField field;
  int degree() const { return field.degree(); }
};

// A curve Y = X minus D in one of the supported families, with the arithmetic
// data needed to run the method at the auxiliary prime p.
class CurveProblem {
 public:
  static CurveProblem hyperelliptic(std::vector<mpz_class> f, RationalPoint base, std::vector<long> S, long p,
                                    int precision);
  static CurveProblem superelliptic(long a, RationalPoint base, std::vector<long> S, long p, int precision);

  CurveFamily family() const { return family_; }
  const std::vector<mpz_class>& f() const { return f_; }
  long parameter_a() const { return a_; }
  int degree() const { return static_cast<int>(f_.size()) - 1; }
  bool even_degree() const { return family_ == CurveFamily::Hyperelliptic && degree() % 2 == 0; }
  int genus() const { return genus_; }
  const mpz_class& leading_coefficient() const { return f_.back(); }
  const mpz_class& sqrt_leading() const { return sqrt_d_; }
  const std::vector<Cusp>& cusps() const { return cusps_; }
  const Cusp& cusp(const std::string& id) const;
  int geometric_cusps() const;
  int real_cusp_places() const;
  int complex_cusp_places() const;
  int basis_size() const { return genus_ + geometric_cusps() - 1; }
  const RationalPoint& base_point() const { return base_; }
  const std::vector<long>& S() const { return S_; }
  long prime() const { return p_; }
  int precision() const { return precision_; }

  // Copy with a different auxiliary prime or precision, revalidated.
  CurveProblem with_prime(long p, int precision) const;

  bool on_curve(const RationalPoint& pt) const;
  // Up to the precision of the coordinates.
  bool on_curve(const PadicPoint& pt) const;
  // F(x, y) for the affine model: y^2 - f(x) or y^3 - (x^3 + a x^2 + x).
  std::vector<std::vector<mpz_class>> plane_equation() const;

  void validate() const;
  // Good reduction at q for the affine plane model.
  bool good_reduction_at(long q) const;

 private:
  CurveFamily family_ = CurveFamily::Hyperelliptic;
  std::vector<mpz_class> f_;
  long a_ = 0;
  int genus_ = 0;
  mpz_class sqrt_d_;
  std::vector<Cusp> cusps_;
  RationalPoint base_;
  std::vector<long> S_;
  long p_ = 0;
  int precision_ = 12;
};

struct LogDifferential {
  // Q_p-combination of the basis forms; `label` names single basis elements.
  std::vector<PadicNumber> coefficients;
  std::string label;
  bool holomorphic = false;
};

std::vector<LogDifferential> differential_basis(const CurveProblem& problem);
LogDifferential basis_element(const CurveProblem& problem, int j);

// Residue of the j-th basis form at a cusp, as an element of k(Q).
FieldElement residue_at_cusp(const CurveProblem& problem, int j, const Cusp& cusp);

// Residues at all geometric cusps of a combination, one entry per (cusp, embedding).
struct GeometricCuspResidue {
  std::string cusp_id;
  FieldEmbedding embedding;
  PadicNumber residue;
};
std::vector<GeometricCuspResidue> geometric_residues(const CurveProblem& problem, const LogDifferential& omega,
                                                     int precision);

enum class DiscKind { Affine, Weierstrass, Infinite, Cuspidal };
enum class DiscParameter { X, Y, W };

std::string to_string(DiscKind kind);

struct ResidueDisc {
  long xbar = 0;
  long ybar = 0;
  DiscKind kind = DiscKind::Affine;
  DiscParameter parameter = DiscParameter::X;
  std::string label;
  // Integration from the base point is not available for this disc.
  bool restricted = false;
  PadicPoint center;
  TruncatedSeries x;
  TruncatedSeries y;
};

std::vector<ResidueDisc> residue_discs(const CurveProblem& problem);
// Disc of a single point given by its reduction.
ResidueDisc disc_of(const CurveProblem& problem, const PadicPoint& pt);
ResidueDisc make_disc(const CurveProblem& problem, long xbar, long ybar, int order);

// Parameter t of a point in the disc (x = x0 + p t, or y = y0 + p t).
PadicNumber disc_parameter(const ResidueDisc& disc, const PadicPoint& pt);
PadicPoint point_at(const ResidueDisc& disc, const PadicNumber& t);
bool same_disc(const ResidueDisc& a, const ResidueDisc& b);

// omega = g(t) dt on the disc; j-th basis form or a combination.
TruncatedSeries expand_differential_on_disc(const CurveProblem& problem, int j, const ResidueDisc& disc);
TruncatedSeries expand_differential_on_disc(const CurveProblem& problem, const LogDifferential& omega,
                                            const ResidueDisc& disc);

// Laurent data on a cuspidal disc of the even model: omega = t^(-1) * h(t) dt.
TruncatedSeries expand_times_parameter_at_infinity(const CurveProblem& problem, int j, const ResidueDisc& disc);

// Truncated series arithmetic helpers on coefficient vectors.
namespace series_ops {
std::vector<PadicNumber> mul(const std::vector<PadicNumber>& a, const std::vector<PadicNumber>& b, int order);
std::vector<PadicNumber> inverse(const std::vector<PadicNumber>& a, int order);
std::vector<PadicNumber> add(const std::vector<PadicNumber>& a, const std::vector<PadicNumber>& b);
std::vector<PadicNumber> scale(const std::vector<PadicNumber>& a, const PadicNumber& c);
// Polynomial with coefficients c evaluated at the series s.
std::vector<PadicNumber> compose_poly(const std::vector<PadicNumber>& c, const std::vector<PadicNumber>& s, int order);
}  // namespace series_ops

}  // namespace achab
