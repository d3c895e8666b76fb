#ifndef BGESCORE_LINALG_HPP
#define BGESCORE_LINALG_HPP

#include <initializer_list>
#include <vector>

#include "bgescore/errors.hpp"

namespace bge {

// Dense row-major matrix of doubles.  Small dimensions throughout; no view
// machinery, subsets are gathered into compact buffers where needed.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  bool operator==(const Matrix& other) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Sorted set of distinct column/row indices used to select principal
// submatrices and variable subsets.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<int> xs);
  explicit IndexSet(std::vector<int> xs);

  int size() const { return static_cast<int>(xs_.size()); }
  bool empty() const { return xs_.empty(); }
  int operator[](int i) const { return xs_[i]; }
  bool contains(int v) const;

  IndexSet with(int v) const;     // copy with v inserted
  IndexSet without(int v) const;  // copy with v removed (no-op if absent)

  std::vector<int>::const_iterator begin() const { return xs_.begin(); }
  std::vector<int>::const_iterator end() const { return xs_.end(); }
  const std::vector<int>& indices() const { return xs_; }

  bool operator==(const IndexSet& other) const = default;
  auto operator<=>(const IndexSet& other) const = default;

 private:
  std::vector<int> xs_;  // strictly increasing
};

// Symmetric positive definite matrix.  Symmetry is made exact on
// construction (lower triangle wins); definiteness is checked by a full
// Cholesky factorization.
class SpdMatrix {
 public:
  SpdMatrix() = default;  // dimension 0

  // Throws DimensionMismatch if not square, NotPositiveDefinite if the
  // asymmetry exceeds sym_tol * max|entry| or a Cholesky pivot fails.
  explicit SpdMatrix(Matrix m, double sym_tol = 0.0);

  static SpdMatrix identity(int n);
  static SpdMatrix scaled_identity(int n, double scale);

  int dim() const { return m_.rows(); }
  double operator()(int r, int c) const { return m_(r, c); }
  const Matrix& matrix() const { return m_; }

  bool operator==(const SpdMatrix& other) const = default;

 private:
  Matrix m_;
};

// Relative pivot floor for Cholesky: a pivot is rejected when it is
// <= PIVOT_RTOL * max diagonal entry of the (sub)matrix being factored.
inline constexpr double PIVOT_RTOL = 1e-12;

// Lower-triangular L with L L^T = A and positive diagonal.
Matrix cholesky(const SpdMatrix& a);

// log det of the principal submatrix A[Y, Y], via Cholesky on a compact
// l x l buffer.  Y must be nonempty with indices in range.  Throws
// NotPositiveDefinite if the submatrix is not (numerically) positive
// definite.
double logdet_submatrix(const Matrix& a, const IndexSet& y);
inline double logdet_submatrix(const SpdMatrix& a, const IndexSet& y) {
  return logdet_submatrix(a.matrix(), y);
}

// A^{-1} computed from the Cholesky factor; result is exactly symmetric.
SpdMatrix spd_inverse(const SpdMatrix& a);

// ((A^{-1})[Y, Y])^{-1}: invert first, then select.  Distinct from
// A[Y, Y] whenever A has nonzero off-diagonal structure linking Y to its
// complement.
SpdMatrix inverse_selected_submatrix(const SpdMatrix& a, const IndexSet& y);
SpdMatrix inverse_selected_submatrix_from_inverse(const Matrix& a_inv, const IndexSet& y);

// log of the l-dimensional multivariate gamma function at x/2:
//   ln Gamma_l(x/2) = l(l-1)/4 * ln pi + sum_{j=1..l} ln Gamma((x + 1 - j)/2)
// Requires l >= 1 and x > l - 1.
double log_multigamma(int l, double x);

}  // namespace bge

#endif
