#include "hyperreg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyperreg/errors.hpp"

namespace hyperreg {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

std::string dims(std::size_t a, std::size_t b) {
  return std::to_string(a) + " vs " + std::to_string(b);
}

}  // namespace

// ---------------------------------------------------------------------------
// DenseVector

DenseVector::DenseVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    require(std::isfinite(values_[i]), "DenseVector: non-finite entry at index " + std::to_string(i));
  }
}

DenseVector::DenseVector(std::initializer_list<double> values)
    : DenseVector(std::vector<double>(values)) {}

DenseVector DenseVector::zeros(std::size_t n) { return DenseVector(std::vector<double>(n, 0.0)); }

DenseVector DenseVector::constant(std::size_t n, double value) {
  return DenseVector(std::vector<double>(n, value));
}

// ---------------------------------------------------------------------------
// DenseSymmetric

DenseSymmetric::DenseSymmetric(std::size_t dim, std::vector<double> values)
    : dim_(dim), values_(std::move(values)) {
  require(values_.size() == dim_ * dim_, "DenseSymmetric: expected " + std::to_string(dim_ * dim_) +
                                             " values, got " + std::to_string(values_.size()));
  double scale = 0.0;
  for (double v : values_) {
    require(std::isfinite(v), "DenseSymmetric: non-finite entry");
    scale = std::max(scale, std::abs(v));
  }
  const double tol = 1e-12 * scale;
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      require(std::abs(values_[i * dim_ + j] - values_[j * dim_ + i]) <= tol,
              "DenseSymmetric: not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
}

DenseSymmetric DenseSymmetric::identity(std::size_t dim) {
  std::vector<double> v(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) v[i * dim + i] = 1.0;
  return DenseSymmetric(dim, std::move(v));
}

DenseSymmetric DenseSymmetric::diagonal(std::span<const double> diag) {
  const std::size_t dim = diag.size();
  std::vector<double> v(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) v[i * dim + i] = diag[i];
  return DenseSymmetric(dim, std::move(v));
}

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix::SparseMatrix(std::size_t n_rows, std::size_t n_cols, std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  require(row_offsets_.size() == n_rows_ + 1, "SparseMatrix: row_offsets must have n_rows+1 entries");
  require(row_offsets_.front() == 0, "SparseMatrix: row_offsets must start at 0");
  require(row_offsets_.back() == values_.size(), "SparseMatrix: last row offset must equal nnz");
  require(col_indices_.size() == values_.size(), "SparseMatrix: col_indices and values differ in length");
  for (std::size_t i = 0; i < n_rows_; ++i) {
    require(row_offsets_[i] <= row_offsets_[i + 1], "SparseMatrix: row_offsets must be non-decreasing");
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      require(col_indices_[k] < n_cols_, "SparseMatrix: column index out of range in row " + std::to_string(i));
      require(k == row_offsets_[i] || col_indices_[k - 1] < col_indices_[k],
              "SparseMatrix: column indices must be strictly increasing in row " + std::to_string(i));
      require(std::isfinite(values_[k]), "SparseMatrix: non-finite value in row " + std::to_string(i));
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t n_rows, std::size_t n_cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    require(t.row < n_rows && t.col < n_cols, "SparseMatrix: triplet (" + std::to_string(t.row) + "," +
                                                  std::to_string(t.col) + ") out of range");
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> offsets(n_rows + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(triplets.size());
  vals.reserve(triplets.size());
  std::size_t k = 0;
  while (k < triplets.size()) {
    const std::size_t r = triplets[k].row;
    const std::size_t c = triplets[k].col;
    double sum = 0.0;
    for (; k < triplets.size() && triplets[k].row == r && triplets[k].col == c; ++k) sum += triplets[k].value;
    if (sum != 0.0) {
      cols.push_back(c);
      vals.push_back(sum);
      ++offsets[r + 1];
    }
  }
  for (std::size_t i = 0; i < n_rows; ++i) offsets[i + 1] += offsets[i];
  return SparseMatrix(n_rows, n_cols, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::from_dense(std::size_t n_rows, std::size_t n_cols, std::span<const double> row_major) {
  require(row_major.size() == n_rows * n_cols, "SparseMatrix::from_dense: size mismatch");
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < n_rows; ++i) {
    for (std::size_t j = 0; j < n_cols; ++j) {
      const double v = row_major[i * n_cols + j];
      if (v != 0.0) {
        cols.push_back(j);
        vals.push_back(v);
      }
    }
    offsets.push_back(vals.size());
  }
  return SparseMatrix(n_rows, n_cols, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> offsets(n + 1);
  std::vector<std::size_t> cols(n);
  for (std::size_t i = 0; i <= n; ++i) offsets[i] = i;
  for (std::size_t i = 0; i < n; ++i) cols[i] = i;
  return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> out(n_rows_ * n_cols_, 0.0);
  for (std::size_t i = 0; i < n_rows_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) out[i * n_cols_ + col_indices_[k]] = values_[k];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vector helpers

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "dot: length mismatch " + dims(a.size(), b.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) {
  // Scaled to stay finite for large entries.
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double v : a) {
    const double t = v / scale;
    s += t * t;
  }
  return scale * std::sqrt(s);
}

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

DenseVector subtract(const DenseVector& a, const DenseVector& b) {
  require(a.size() == b.size(), "subtract: length mismatch " + dims(a.size(), b.size()));
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return DenseVector(std::move(out));
}

DenseVector axpy(const DenseVector& a, double alpha, const DenseVector& b) {
  require(a.size() == b.size(), "axpy: length mismatch " + dims(a.size(), b.size()));
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + alpha * b[i];
  return DenseVector(std::move(out));
}

// ---------------------------------------------------------------------------
// Sparse products

DenseVector spmv(const SparseMatrix& A, const DenseVector& x) {
  require(x.size() == A.n_cols(), "spmv: x has length " + std::to_string(x.size()) + ", A has " +
                                      std::to_string(A.n_cols()) + " columns");
  const auto offsets = A.row_offsets();
  const auto cols = A.col_indices();
  const auto vals = A.values();
  std::vector<double> out(A.n_rows(), 0.0);
  for (std::size_t i = 0; i < A.n_rows(); ++i) {
    double s = 0.0;
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) s += vals[k] * x[cols[k]];
    out[i] = s;
  }
  return DenseVector(std::move(out));
}

DenseVector spmv_t(const SparseMatrix& A, const DenseVector& y) {
  require(y.size() == A.n_rows(), "spmv_t: y has length " + std::to_string(y.size()) + ", A has " +
                                      std::to_string(A.n_rows()) + " rows");
  const auto offsets = A.row_offsets();
  const auto cols = A.col_indices();
  const auto vals = A.values();
  std::vector<double> out(A.n_cols(), 0.0);
  for (std::size_t i = 0; i < A.n_rows(); ++i) {
    const double yi = y[i];
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) out[cols[k]] += vals[k] * yi;
  }
  return DenseVector(std::move(out));
}

DenseSymmetric weighted_gram(const SparseMatrix& A, const DenseVector& d) {
  require(d.size() == A.n_rows(), "weighted_gram: d has length " + std::to_string(d.size()) + ", A has " +
                                      std::to_string(A.n_rows()) + " rows");
  const std::size_t m = A.n_cols();
  const auto offsets = A.row_offsets();
  const auto cols = A.col_indices();
  const auto vals = A.values();
  std::vector<double> g(m * m, 0.0);
  for (std::size_t r = 0; r < A.n_rows(); ++r) {
    const double dr = d[r];
    if (dr == 0.0) continue;
    for (std::size_t p = offsets[r]; p < offsets[r + 1]; ++p) {
      const double ap = dr * vals[p];
      const std::size_t cp = cols[p];
      // Column indices are increasing, so cp <= cq fills the upper triangle.
      for (std::size_t q = p; q < offsets[r + 1]; ++q) g[cp * m + cols[q]] += ap * vals[q];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) g[j * m + i] = g[i * m + j];
  }
  return DenseSymmetric(m, std::move(g));
}

DenseVector symv(const DenseSymmetric& H, const DenseVector& x) {
  require(H.dim() == x.size(), "symv: dimension mismatch " + dims(H.dim(), x.size()));
  std::vector<double> out(H.dim(), 0.0);
  for (std::size_t i = 0; i < H.dim(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < H.dim(); ++j) s += H(i, j) * x[j];
    out[i] = s;
  }
  return DenseVector(std::move(out));
}

DenseSymmetric subtract(const DenseSymmetric& a, const DenseSymmetric& b) {
  require(a.dim() == b.dim(), "subtract: dimension mismatch " + dims(a.dim(), b.dim()));
  std::vector<double> out(a.values().begin(), a.values().end());
  const auto bv = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  return DenseSymmetric(a.dim(), std::move(out));
}

// ---------------------------------------------------------------------------
// Cholesky

Cholesky::Cholesky(const DenseSymmetric& H) : dim_(H.dim()), lower_(H.dim() * H.dim(), 0.0) {
  const std::size_t n = dim_;
  for (std::size_t j = 0; j < n; ++j) {
    double diag = H(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= lower_[j * n + k] * lower_[j * n + k];
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      throw NotPositiveDefinite("Cholesky: non-positive pivot " + std::to_string(diag) + " at column " +
                                std::to_string(j));
    }
    const double ljj = std::sqrt(diag);
    lower_[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = H(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower_[i * n + k] * lower_[j * n + k];
      lower_[i * n + j] = s / ljj;
    }
  }
}

void Cholesky::solve_lower(std::span<double> b) const {
  require(b.size() == dim_, "Cholesky::solve_lower: dimension mismatch");
  for (std::size_t i = 0; i < dim_; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= lower_[i * dim_ + k] * b[k];
    b[i] = s / lower_[i * dim_ + i];
  }
}

void Cholesky::solve_upper(std::span<double> b) const {
  require(b.size() == dim_, "Cholesky::solve_upper: dimension mismatch");
  for (std::size_t ii = dim_; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < dim_; ++k) s -= lower_[k * dim_ + ii] * b[k];
    b[ii] = s / lower_[ii * dim_ + ii];
  }
}

DenseVector Cholesky::solve(const DenseVector& g) const {
  require(g.size() == dim_, "Cholesky::solve: dimension mismatch " + dims(dim_, g.size()));
  std::vector<double> y(g.values());
  solve_lower(y);
  solve_upper(y);
  return DenseVector(std::move(y));
}

DenseSymmetric Cholesky::whiten(const DenseSymmetric& S) const {
  require(S.dim() == dim_, "Cholesky::whiten: dimension mismatch " + dims(dim_, S.dim()));
  const std::size_t n = dim_;
  // X = L^{-1} S, column by column.
  std::vector<double> X(n * n);
  std::vector<double> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = S(i, j);
    solve_lower(col);
    for (std::size_t i = 0; i < n; ++i) X[i * n + j] = col[i];
  }
  // W = X L^{-T} = (L^{-1} X^T)^T.
  std::vector<double> W(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) col[k] = X[i * n + k];
    solve_lower(col);
    for (std::size_t j = 0; j < n; ++j) W[i * n + j] = col[j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (W[i * n + j] + W[j * n + i]);
      W[i * n + j] = avg;
      W[j * n + i] = avg;
    }
  }
  return DenseSymmetric(n, std::move(W));
}

DenseVector solve_spd(const DenseSymmetric& H, const DenseVector& g) {
  require(H.dim() == g.size(), "solve_spd: dimension mismatch " + dims(H.dim(), g.size()));
  const Cholesky chol(H);
  DenseVector y = chol.solve(g);
  // One step of iterative refinement keeps the residual at roundoff level
  // for moderately conditioned systems.
  const DenseVector r = subtract(g, symv(H, y));
  return axpy(y, 1.0, chol.solve(r));
}

// ---------------------------------------------------------------------------
// Eigenvalues

std::vector<double> symmetric_eigenvalues(const DenseSymmetric& H) {
  const std::size_t n = H.dim();
  std::vector<double> a(H.values().begin(), H.values().end());
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  double total = 0.0;
  for (double v : a) total += v * v;
  const double tol = 1e-30 * total;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    }
    if (off <= tol) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double min_eigenvalue(const DenseSymmetric& H) {
  require(H.dim() > 0, "min_eigenvalue: empty matrix");
  return symmetric_eigenvalues(H).front();
}

double spectral_norm(const DenseSymmetric& H) {
  if (H.dim() == 0) return 0.0;
  const auto eig = symmetric_eigenvalues(H);
  return std::max(std::abs(eig.front()), std::abs(eig.back()));
}

SingularValueRange extreme_singular_values(const SparseMatrix& A) {
  if (A.n_rows() < A.n_cols()) {
    throw UnsupportedShape("extreme_singular_values: need n_rows >= n_cols, got " + std::to_string(A.n_rows()) +
                           "x" + std::to_string(A.n_cols()));
  }
  require(A.n_cols() > 0, "extreme_singular_values: matrix has no columns");
  const auto eig = symmetric_eigenvalues(weighted_gram(A, DenseVector::constant(A.n_rows(), 1.0)));
  return {std::sqrt(std::max(eig.front(), 0.0)), std::sqrt(std::max(eig.back(), 0.0))};
}

}  // namespace hyperreg
