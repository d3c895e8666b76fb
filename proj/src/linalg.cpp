#include "bgescore/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace bge {

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) throw DimensionMismatch("negative matrix dimension");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  data_.reserve(static_cast<size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_)
      throw DimensionMismatch("ragged initializer for Matrix");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

IndexSet::IndexSet(std::vector<int> xs) : xs_(std::move(xs)) {
  std::sort(xs_.begin(), xs_.end());
  if (std::adjacent_find(xs_.begin(), xs_.end()) != xs_.end())
    throw DomainError("duplicate index in IndexSet");
  if (!xs_.empty() && xs_.front() < 0) throw DomainError("negative index in IndexSet");
}

IndexSet::IndexSet(std::initializer_list<int> xs) : IndexSet(std::vector<int>(xs)) {}

bool IndexSet::contains(int v) const {
  return std::binary_search(xs_.begin(), xs_.end(), v);
}

IndexSet IndexSet::with(int v) const {
  if (v < 0) throw DomainError("negative index in IndexSet");
  if (contains(v)) return *this;
  IndexSet out;
  out.xs_ = xs_;
  out.xs_.insert(std::upper_bound(out.xs_.begin(), out.xs_.end(), v), v);
  return out;
}

IndexSet IndexSet::without(int v) const {
  IndexSet out;
  out.xs_ = xs_;
  auto it = std::lower_bound(out.xs_.begin(), out.xs_.end(), v);
  if (it != out.xs_.end() && *it == v) out.xs_.erase(it);
  return out;
}

namespace {

// In-place lower Cholesky of a compact l x l buffer (row-major).  Returns
// false when a pivot falls at or below PIVOT_RTOL * max initial diagonal.
bool cholesky_in_place(std::vector<double>& a, int l) {
  double max_diag = 0.0;
  for (int i = 0; i < l; ++i) max_diag = std::max(max_diag, std::abs(a[i * l + i]));
  const double floor = PIVOT_RTOL * max_diag;
  for (int j = 0; j < l; ++j) {
    double d = a[j * l + j];
    for (int k = 0; k < j; ++k) d -= a[j * l + k] * a[j * l + k];
    if (!(d > floor) || !std::isfinite(d)) return false;
    const double root = std::sqrt(d);
    a[j * l + j] = root;
    for (int i = j + 1; i < l; ++i) {
      double s = a[i * l + j];
      for (int k = 0; k < j; ++k) s -= a[i * l + k] * a[j * l + k];
      a[i * l + j] = s / root;
    }
  }
  return true;
}

void gather_submatrix(const Matrix& a, const IndexSet& y, std::vector<double>& buf) {
  const int l = y.size();
  buf.resize(static_cast<size_t>(l) * l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) buf[i * l + j] = a(y[i], y[j]);
}

}  // namespace

SpdMatrix::SpdMatrix(Matrix m, double sym_tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DimensionMismatch("SpdMatrix requires a square matrix");
  const int n = m_.rows();
  double max_abs = 0.0, max_asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      max_abs = std::max(max_abs, std::abs(m_(i, j)));
      if (j > i) max_asym = std::max(max_asym, std::abs(m_(i, j) - m_(j, i)));
    }
  if (max_asym > sym_tol * max_abs)
    throw NotPositiveDefinite("matrix is not symmetric");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m_(i, j) = m_(j, i);
  if (n > 0) {
    std::vector<double> buf;
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    gather_submatrix(m_, IndexSet(all), buf);
    if (!cholesky_in_place(buf, n))
      throw NotPositiveDefinite("matrix is not positive definite");
  }
}

SpdMatrix SpdMatrix::identity(int n) { return scaled_identity(n, 1.0); }

SpdMatrix SpdMatrix::scaled_identity(int n, double scale) {
  if (!(scale > 0.0)) throw NotPositiveDefinite("scaled identity needs a positive scale");
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = scale;
  return SpdMatrix(std::move(m));
}

Matrix cholesky(const SpdMatrix& a) {
  const int n = a.dim();
  if (n < 1) throw DimensionMismatch("cholesky needs dimension >= 1");
  std::vector<double> buf;
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  gather_submatrix(a.matrix(), IndexSet(all), buf);
  if (!cholesky_in_place(buf, n))
    throw NotPositiveDefinite("cholesky: matrix is not positive definite");
  Matrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) out(i, j) = buf[i * n + j];
  return out;
}

double logdet_submatrix(const Matrix& a, const IndexSet& y) {
  if (y.empty()) throw DomainError("logdet_submatrix needs a nonempty index set");
  if (a.rows() != a.cols()) throw DimensionMismatch("logdet_submatrix needs a square matrix");
  if (y[y.size() - 1] >= a.rows()) throw DomainError("index out of range in logdet_submatrix");
  const int l = y.size();
  std::vector<double> buf;
  gather_submatrix(a, y, buf);
  if (!cholesky_in_place(buf, l)) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "submatrix of order %d is not positive definite", l);
    throw NotPositiveDefinite(msg);
  }
  long double acc = 0.0L;
  for (int i = 0; i < l; ++i) acc += std::log(static_cast<long double>(buf[i * l + i]));
  return static_cast<double>(2.0L * acc);
}

SpdMatrix spd_inverse(const SpdMatrix& a) {
  const int n = a.dim();
  std::vector<double> chol;
  {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    gather_submatrix(a.matrix(), IndexSet(all), chol);
  }
  if (n > 0 && !cholesky_in_place(chol, n))
    throw NotPositiveDefinite("spd_inverse: matrix is not positive definite");
  // Columns of C = L^{-1} by forward substitution, then A^{-1} = C^T C.
  std::vector<double> cinv(static_cast<size_t>(n) * n, 0.0);
  for (int col = 0; col < n; ++col) {
    for (int i = col; i < n; ++i) {
      double s = (i == col) ? 1.0 : 0.0;
      for (int k = col; k < i; ++k) s -= chol[i * n + k] * cinv[k * n + col];
      cinv[i * n + col] = s / chol[i * n + i];
    }
  }
  Matrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      long double s = 0.0L;
      for (int k = i; k < n; ++k)
        s += static_cast<long double>(cinv[k * n + i]) * cinv[k * n + j];
      out(i, j) = static_cast<double>(s);
      out(j, i) = out(i, j);
    }
  return SpdMatrix(std::move(out));
}

SpdMatrix inverse_selected_submatrix_from_inverse(const Matrix& a_inv, const IndexSet& y) {
  if (y.empty()) throw DomainError("inverse_selected_submatrix needs a nonempty index set");
  if (y[y.size() - 1] >= a_inv.rows())
    throw DomainError("index out of range in inverse_selected_submatrix");
  const int l = y.size();
  Matrix sel(l, l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) sel(i, j) = a_inv(y[i], y[j]);
  return spd_inverse(SpdMatrix(std::move(sel)));
}

SpdMatrix inverse_selected_submatrix(const SpdMatrix& a, const IndexSet& y) {
  return inverse_selected_submatrix_from_inverse(spd_inverse(a).matrix(), y);
}

double log_multigamma(int l, double x) {
  if (l < 1) throw DomainError("log_multigamma needs l >= 1");
  if (!(x > l - 1)) throw DomainError("log_multigamma needs x > l - 1");
  long double acc = 0.25L * l * (l - 1) * std::log(3.14159265358979323846264338327950288L);
  for (int j = 1; j <= l; ++j)
    acc += lgammal((static_cast<long double>(x) + 1 - j) / 2.0L);
  return static_cast<double>(acc);
}

}  // namespace bge
