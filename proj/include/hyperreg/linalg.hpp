#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hyperreg {

/// Dense real vector. Entries are checked for finiteness on construction.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::vector<double> values);
  DenseVector(std::initializer_list<double> values);

  static DenseVector zeros(std::size_t n);
  static DenseVector constant(std::size_t n, double value);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> span() const { return values_; }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> values_;
};

/// Row-major dense symmetric matrix.
class DenseSymmetric {
 public:
  DenseSymmetric() = default;
  /// Throws ContractViolation if values.size() != dim*dim or the matrix is
  /// not symmetric to 1e-12 relative tolerance.
  DenseSymmetric(std::size_t dim, std::vector<double> values);

  static DenseSymmetric identity(std::size_t dim);
  static DenseSymmetric diagonal(std::span<const double> diag);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * dim_ + j]; }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within a row and only non-zero values are stored, so nnz() is the number
/// of non-zero entries.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<double> values);

  /// Duplicate coordinates are summed; entries that end up exactly zero are dropped.
  static SparseMatrix from_triplets(std::size_t n_rows, std::size_t n_cols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix from_dense(std::size_t n_rows, std::size_t n_cols,
                                 std::span<const double> row_major);
  static SparseMatrix identity(std::size_t n);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::size_t> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  std::span<const std::size_t> row_cols(std::size_t i) const {
    return std::span(col_indices_).subspan(row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]);
  }
  std::span<const double> row_values(std::size_t i) const {
    return std::span(values_).subspan(row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]);
  }

  /// Row-major dense copy, for tests and small diagnostics.
  std::vector<double> to_dense() const;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

struct SingularValueRange {
  double sigma_min;
  double sigma_max;
};

// Vector helpers. All reductions run left to right.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
/// a - b
DenseVector subtract(const DenseVector& a, const DenseVector& b);
/// a + alpha * b
DenseVector axpy(const DenseVector& a, double alpha, const DenseVector& b);

DenseVector spmv(const SparseMatrix& A, const DenseVector& x);
DenseVector spmv_t(const SparseMatrix& A, const DenseVector& y);

/// A^T diag(d) A. Rows with d_k == 0 are skipped.
DenseSymmetric weighted_gram(const SparseMatrix& A, const DenseVector& d);

/// Product of a dense symmetric matrix with a vector.
DenseVector symv(const DenseSymmetric& H, const DenseVector& x);

/// a - b, entrywise.
DenseSymmetric subtract(const DenseSymmetric& a, const DenseSymmetric& b);

/// Lower-triangular Cholesky factor L with H = L L^T.
class Cholesky {
 public:
  /// Throws NotPositiveDefinite on a non-positive pivot.
  explicit Cholesky(const DenseSymmetric& H);

  std::size_t dim() const { return dim_; }
  double factor(std::size_t i, std::size_t j) const { return lower_[i * dim_ + j]; }

  /// Solves L y = b in place.
  void solve_lower(std::span<double> b) const;
  /// Solves L^T y = b in place.
  void solve_upper(std::span<double> b) const;
  DenseVector solve(const DenseVector& g) const;

  /// L^{-1} S L^{-T}; has the same spectrum as H^{-1/2} S H^{-1/2}.
  DenseSymmetric whiten(const DenseSymmetric& S) const;

 private:
  std::size_t dim_;
  std::vector<double> lower_;
};

/// Solves H y = g for symmetric positive definite H. Throws NotPositiveDefinite
/// when the factorization fails.
DenseVector solve_spd(const DenseSymmetric& H, const DenseVector& g);

/// All eigenvalues in ascending order, cyclic Jacobi.
std::vector<double> symmetric_eigenvalues(const DenseSymmetric& H);
double min_eigenvalue(const DenseSymmetric& H);
/// max |lambda|.
double spectral_norm(const DenseSymmetric& H);

/// Extreme singular values of a tall matrix from the eigenvalues of A^T A.
/// Throws UnsupportedShape when n_rows < n_cols.
SingularValueRange extreme_singular_values(const SparseMatrix& A);

}  // namespace hyperreg
