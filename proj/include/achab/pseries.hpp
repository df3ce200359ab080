#pragma once

#include <climits>
#include <string>
#include <vector>

#include "achab/padic.hpp"

namespace achab {

// Sum c_n t^n for n < T, plus an unknown tail whose coefficients satisfy
// v(c_n) >= tail_valuation + tail_slope * (n - T).
class TruncatedSeries {
 public:
  static constexpr int kUnbounded = INT_MIN;

  TruncatedSeries() = default;
  TruncatedSeries(long p, std::vector<PadicNumber> coeffs, int tail_valuation = PadicNumber::kInfinity,
                  double tail_slope = 0.0);

  static TruncatedSeries monomial(long p, int degree, const PadicNumber& c, int order);

  long prime() const { return p_; }
  int order() const { return static_cast<int>(c_.size()); }
  const std::vector<PadicNumber>& coefficients() const { return c_; }
  const PadicNumber& coefficient(int n) const;
  int tail_valuation() const { return tail_; }
  double tail_slope() const { return slope_; }
  bool is_polynomial() const { return tail_ == PadicNumber::kInfinity; }
  void set_tail(int tail_valuation, double tail_slope);

  // Lower bound on v(c_n), any n >= 0 (uses stored digits below T, tail bound above).
  double valuation_bound(int n) const;
  // Absolute precision to which values on Z_p are determined.
  int value_precision() const;

  PadicNumber evaluate(const PadicNumber& t) const;
  TruncatedSeries derivative() const;
  TruncatedSeries truncated(int order) const;
  TruncatedSeries scaled(const PadicNumber& c) const;

  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const TruncatedSeries& o) const;

  // Display as "(a)t + (b)t^2 + O(p^k, t^T)" with coefficients shown through p^k.
  std::string to_string(int digits, int terms = -1) const;

 private:
  long p_ = 0;
  std::vector<PadicNumber> c_;
  int tail_ = PadicNumber::kInfinity;
  double slope_ = 0.0;
};

TruncatedSeries compose(const TruncatedSeries& f, const TruncatedSeries& g);
TruncatedSeries formal_antiderivative(const TruncatedSeries& f);

// Index of the last coefficient attaining the minimal valuation.
int strassmann_bound(const TruncatedSeries& f);

struct SeriesRoot {
  PadicNumber t;
  int multiplicity = 1;
};

struct RootIsolation {
  std::vector<SeriesRoot> roots;
  int bound = 0;
};

RootIsolation strassmann_roots(const TruncatedSeries& f);

}  // namespace achab
