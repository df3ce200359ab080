#include "achab/qlinalg.hpp"

#include <algorithm>
#include <numeric>

namespace achab {

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != cols_) fail(ErrorCode::ShapeMismatch, "ragged matrix literal");
    for (long x : row) data_.emplace_back(x);
  }
}

RationalMatrix RationalMatrix::identity(int n) {
  RationalMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool RationalMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (cols_ != o.rows_) fail(ErrorCode::ShapeMismatch, "matrix product shapes");
  RationalMatrix c(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const mpq_class& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j) c(i, j) += a * o(k, j);
    }
  return c;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorCode::ShapeMismatch, "matrix sum shapes");
  RationalMatrix c = *this;
  for (size_t i = 0; i < data_.size(); ++i) c.data_[i] += o.data_[i];
  return c;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorCode::ShapeMismatch, "matrix difference shapes");
  RationalMatrix c = *this;
  for (size_t i = 0; i < data_.size(); ++i) c.data_[i] -= o.data_[i];
  return c;
}

bool RationalMatrix::operator==(const RationalMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

std::vector<mpq_class> RationalMatrix::apply(const std::vector<mpq_class>& v) const {
  if (static_cast<int>(v.size()) != cols_) fail(ErrorCode::ShapeMismatch, "matrix-vector shapes");
  std::vector<mpq_class> out(rows_, 0);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

namespace {

// Reduced row echelon form; returns pivot columns.
std::vector<int> rref(RationalMatrix& a) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < a.cols() && row < a.rows(); ++col) {
    int piv = row;
    while (piv < a.rows() && a(piv, col) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != row)
      for (int j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
    mpq_class inv = 1 / a(row, col);
    for (int j = 0; j < a.cols(); ++j) a(row, j) *= inv;
    for (int i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      mpq_class factor = a(i, col);
      for (int j = 0; j < a.cols(); ++j) a(i, j) -= factor * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

RationalMatrix inverse(const RationalMatrix& m) {
  int n = m.rows();
  RationalMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto pivots = rref(aug);
  if (static_cast<int>(pivots.size()) < n || pivots.back() >= n) fail(ErrorCode::ZeroInput, "singular matrix");
  RationalMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  return out;
}

}  // namespace

int RationalMatrix::rank() const {
  RationalMatrix a = *this;
  return static_cast<int>(rref(a).size());
}

RationalMatrix pseudo_inverse(const RationalMatrix& m) {
  RationalMatrix r = m;
  auto pivots = rref(r);
  int rank = static_cast<int>(pivots.size());
  if (rank == 0) return RationalMatrix(m.cols(), m.rows());
  // m = b * c with b the pivot columns of m and c the nonzero rows of rref(m)
  RationalMatrix b(m.rows(), rank), c(rank, m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < rank; ++k) b(i, k) = m(i, pivots[k]);
  for (int k = 0; k < rank; ++k)
    for (int j = 0; j < m.cols(); ++j) c(k, j) = r(k, j);
  RationalMatrix ct = c.transpose(), bt = b.transpose();
  return ct * inverse(c * ct) * inverse(bt * b) * bt;
}

RationalMatrix moore_penrose(const RationalMatrix& m) {
  if (!m.is_symmetric()) fail(ErrorCode::NotSymmetric, "intersection matrix must be symmetric");
  return pseudo_inverse(m);
}

std::vector<std::vector<mpq_class>> rational_kernel(const RationalMatrix& m) {
  RationalMatrix r = m;
  auto pivots = rref(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<mpq_class>> basis;
  for (int f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<mpq_class> v(m.cols(), 0);
    v[f] = 1;
    for (size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -r(static_cast<int>(k), f);
    basis.push_back(v);
  }
  return basis;
}

PadicMatrix::PadicMatrix(int rows, int cols, long p)
    : rows_(rows), cols_(cols), p_(p), data_(static_cast<size_t>(rows) * cols, PadicNumber::exact_zero(p)) {}

std::vector<PadicNumber> PadicMatrix::apply(const std::vector<PadicNumber>& v) const {
  if (static_cast<int>(v.size()) != cols_) fail(ErrorCode::ShapeMismatch, "matrix-vector shapes");
  std::vector<PadicNumber> out(rows_, PadicNumber::exact_zero(p_));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

int PadicMatrix::min_precision() const {
  int n = PadicNumber::kInfinity;
  for (const auto& x : data_) n = std::min(n, x.precision());
  return n;
}

PadicMatrix to_padic(const RationalMatrix& m, long p, int precision) {
  PadicMatrix out(m.rows(), m.cols(), p);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = PadicNumber::rational(p, m(i, j), precision);
  return out;
}

std::vector<PadicNumber> normalize_kernel_vector(const std::vector<PadicNumber>& v) {
  int best = -1;
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    if (best < 0 || v[i].valuation() < v[best].valuation()) best = static_cast<int>(i);
  }
  if (best < 0) fail(ErrorCode::IndistinguishableFromZero, "kernel vector vanishes to precision");
  std::vector<PadicNumber> out;
  PadicNumber inv = v[best].inverse();
  for (size_t i = 0; i < v.size(); ++i) {
    if (static_cast<int>(i) == best) {
      out.push_back(PadicNumber::integer(v[i].prime(), 1, v[i].relative_precision()));
    } else {
      out.push_back(v[i] * inv);
    }
  }
  return out;
}

KernelBasis padic_kernel(const PadicMatrix& m, int guard) {
  long p = m.prime();
  int rows = m.rows(), cols = m.cols();
  PadicMatrix a = m;
  std::vector<int> perm(cols);
  std::iota(perm.begin(), perm.end(), 0);
  int rank = 0;
  for (int step = 0; step < std::min(rows, cols); ++step) {
    int bi = -1, bj = -1;
    bool ambiguous = false;
    for (int i = step; i < rows; ++i)
      for (int j = step; j < cols; ++j) {
        const PadicNumber& x = a(i, j);
        if (x.is_zero()) continue;
        if (x.valuation() >= x.precision() - guard) {
          ambiguous = true;
          continue;
        }
        if (bi < 0 || x.valuation() < a(bi, bj).valuation()) {
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) {
      if (ambiguous) fail(ErrorCode::PrecisionLoss, "rank cannot be certified at working precision");
      break;
    }
    if (bi != step)
      for (int j = 0; j < cols; ++j) std::swap(a(bi, j), a(step, j));
    if (bj != step) {
      for (int i = 0; i < rows; ++i) std::swap(a(i, bj), a(i, step));
      std::swap(perm[bj], perm[step]);
    }
    PadicNumber inv = a(step, step).inverse();
    for (int j = 0; j < cols; ++j) a(step, j) = j == step ? PadicNumber::integer(p, 1, a(step, step).relative_precision()) : a(step, j) * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == step || a(i, step).is_exact_zero()) continue;
      PadicNumber factor = a(i, step);
      for (int j = 0; j < cols; ++j) a(i, j) -= factor * a(step, j);
    }
    ++rank;
  }
  KernelBasis out;
  out.rank = rank;
  for (int f = rank; f < cols; ++f) {
    std::vector<PadicNumber> v(cols, PadicNumber::exact_zero(p));
    v[perm[f]] = PadicNumber::integer(p, 1, m.min_precision() == PadicNumber::kInfinity ? 64 : m.min_precision());
    for (int k = 0; k < rank; ++k) v[perm[k]] = -a(k, f);
    out.vectors.push_back(normalize_kernel_vector(v));
  }
  int n = m.min_precision();
  if (n != PadicNumber::kInfinity) {
    for (const auto& v : out.vectors) {
      for (const auto& r : m.apply(v)) {
        int certified = r.is_zero() ? r.precision() : r.valuation();
        if (certified != PadicNumber::kInfinity) out.loss = std::max(out.loss, n - certified);
      }
    }
  }
  return out;
}

namespace {

PadicNumber leibniz(const PadicMatrix& m, std::vector<int>& cols_left, int row) {
  long p = m.prime();
  if (row == m.rows() - 1) return m(row, cols_left[0]);
  PadicNumber sum = PadicNumber::exact_zero(p);
  for (size_t k = 0; k < cols_left.size(); ++k) {
    int c = cols_left[k];
    if (m(row, c).is_exact_zero()) continue;
    std::vector<int> rest = cols_left;
    rest.erase(rest.begin() + k);
    PadicNumber minor = leibniz(m, rest, row + 1);
    PadicNumber term = m(row, c) * minor;
    sum += (k % 2 == 0) ? term : -term;
  }
  return sum;
}

}  // namespace

PadicNumber determinant(const PadicMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::ShapeMismatch, "determinant of a non-square matrix");
  int n = m.rows();
  if (n == 0) fail(ErrorCode::ShapeMismatch, "determinant of an empty matrix");
  if (n <= 5) {
    std::vector<int> cols(n);
    std::iota(cols.begin(), cols.end(), 0);
    // Leibniz expansion keeps precision bookkeeping exact for small sizes.
    return leibniz(m, cols, 0);
  }
  PadicMatrix a = m;
  PadicNumber det;
  bool sign_flip = false;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i) {
      if (a(i, c).is_zero()) continue;
      if (piv < 0 || a(i, c).valuation() < a(piv, c).valuation()) piv = i;
    }
    if (piv < 0) {
      PadicNumber z = a(c, c);
      for (int i = c; i < n; ++i)
        if (a(i, c).precision() < z.precision()) z = a(i, c);
      return c == 0 ? z : det * z;
    }
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
      sign_flip = !sign_flip;
    }
    det = c == 0 ? a(c, c) : det * a(c, c);
    PadicNumber inv = a(c, c).inverse();
    for (int i = c + 1; i < n; ++i) {
      PadicNumber factor = a(i, c) * inv;
      for (int j = c; j < n; ++j) a(i, j) -= factor * a(c, j);
    }
  }
  return sign_flip ? -det : det;
}

std::vector<PadicNumber> solve(const PadicMatrix& m, const std::vector<PadicNumber>& rhs) {
  int n = m.rows();
  if (m.cols() != n || static_cast<int>(rhs.size()) != n) fail(ErrorCode::ShapeMismatch, "solve shapes");
  PadicMatrix a = m;
  std::vector<PadicNumber> b = rhs;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i) {
      if (a(i, c).is_zero()) continue;
      if (piv < 0 || a(i, c).valuation() < a(piv, c).valuation()) piv = i;
    }
    if (piv < 0) fail(ErrorCode::PrecisionLoss, "matrix is singular to working precision");
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
      std::swap(b[piv], b[c]);
    }
    PadicNumber inv = a(c, c).inverse();
    for (int i = c + 1; i < n; ++i) {
      if (a(i, c).is_exact_zero()) continue;
      PadicNumber factor = a(i, c) * inv;
      for (int j = c; j < n; ++j) a(i, j) -= factor * a(c, j);
      b[i] -= factor * b[c];
    }
  }
  std::vector<PadicNumber> x(n, PadicNumber::exact_zero(m.prime()));
  for (int i = n; i-- > 0;) {
    PadicNumber acc = b[i];
    for (int j = i + 1; j < n; ++j) acc -= a(i, j) * x[j];
    x[i] = acc / a(i, i);
  }
  return x;
}

}  // namespace achab
