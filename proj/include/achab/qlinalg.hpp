#pragma once

#include <gmpxx.h>

#include <vector>

#include "achab/padic.hpp"

namespace achab {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0) {}
  RationalMatrix(std::initializer_list<std::initializer_list<long>> rows);
  static RationalMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  mpq_class& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const mpq_class& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  RationalMatrix transpose() const;
  bool is_symmetric() const;
  int rank() const;
  RationalMatrix operator*(const RationalMatrix& o) const;
  RationalMatrix operator+(const RationalMatrix& o) const;
  RationalMatrix operator-(const RationalMatrix& o) const;
  bool operator==(const RationalMatrix& o) const;
  std::vector<mpq_class> apply(const std::vector<mpq_class>& v) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<mpq_class> data_;
};

// Pseudoinverse of an arbitrary rational matrix via a full-rank factorization.
RationalMatrix pseudo_inverse(const RationalMatrix& m);
// Pseudoinverse of a symmetric matrix; throws NotSymmetric otherwise.
RationalMatrix moore_penrose(const RationalMatrix& m);

// Basis of the rational null space.
std::vector<std::vector<mpq_class>> rational_kernel(const RationalMatrix& m);

class PadicMatrix {
 public:
  PadicMatrix() = default;
  PadicMatrix(int rows, int cols, long p);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  long prime() const { return p_; }
  PadicNumber& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  const PadicNumber& operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  std::vector<PadicNumber> apply(const std::vector<PadicNumber>& v) const;
  int min_precision() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  long p_ = 0;
  std::vector<PadicNumber> data_;
};

PadicMatrix to_padic(const RationalMatrix& m, long p, int precision);

struct KernelBasis {
  std::vector<std::vector<PadicNumber>> vectors;
  int rank = 0;
  // M * v = O(p^(N - loss)) for N the minimal entry precision.
  int loss = 0;
};

KernelBasis padic_kernel(const PadicMatrix& m, int guard = 2);

// Scales v so that its first entry of minimal valuation is 1.
std::vector<PadicNumber> normalize_kernel_vector(const std::vector<PadicNumber>& v);

PadicNumber determinant(const PadicMatrix& m);
std::vector<PadicNumber> solve(const PadicMatrix& a, const std::vector<PadicNumber>& b);

}  // namespace achab
