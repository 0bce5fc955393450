#pragma once

// Shared generators and dense reference computations for the test suites.
// The reference side uses Eigen and the C library hyperbolic functions so it
// shares no code path with the library under test.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "hyperreg/linalg.hpp"
#include "hyperreg/losses.hpp"

namespace hyperreg::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

 private:
  std::mt19937_64 engine_;
};

inline Eigen::MatrixXd dense(const SparseMatrix& A) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(A.n_rows()), static_cast<Eigen::Index>(A.n_cols()));
  for (std::size_t i = 0; i < A.n_rows(); ++i) {
    const auto cols = A.row_cols(i);
    const auto vals = A.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cols[k])) = vals[k];
  }
  return M;
}

inline Eigen::MatrixXd dense(const DenseSymmetric& H) {
  const auto n = static_cast<Eigen::Index>(H.dim());
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = H(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return M;
}

inline Eigen::VectorXd dense(const DenseVector& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.values().data(), static_cast<Eigen::Index>(v.size()));
}

inline DenseVector from_eigen(const Eigen::VectorXd& v) {
  return DenseVector(std::vector<double>(v.data(), v.data() + v.size()));
}

inline double rel_fro(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

inline DenseVector random_vector(std::size_t n, Rng& rng, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return DenseVector(std::move(v));
}

inline DenseVector random_positive(std::size_t n, Rng& rng, double lo = 0.1, double hi = 3.0) {
  return random_vector(n, rng, lo, hi);
}

/// Random sparse matrix with every row non-empty and (when n >= d) full
/// column rank. Entries uniform in [-scale, scale].
inline SparseMatrix random_sparse(std::size_t n, std::size_t d, double density, Rng& rng, double scale = 1.0) {
  for (;;) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i) {
      bool any = false;
      for (std::size_t j = 0; j < d; ++j) {
        if (rng.uniform(0.0, 1.0) < density) {
          t.push_back({i, j, rng.uniform(-scale, scale)});
          any = true;
        }
      }
      if (!any) t.push_back({i, rng.index(d), rng.uniform(-scale, scale)});
    }
    SparseMatrix A = SparseMatrix::from_triplets(n, d, std::move(t));
    if (n < d) return A;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense(A));
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) > 1e-3 * s(0)) return A;
  }
}

/// A scaled so that ||A||_2 equals `target`.
inline SparseMatrix with_spectral_norm(const SparseMatrix& A, double target) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(dense(A));
  const double factor = target / svd.singularValues()(0);
  std::vector<double> vals(A.values().begin(), A.values().end());
  for (auto& v : vals) v *= factor;
  return SparseMatrix(A.n_rows(), A.n_cols(), {A.row_offsets().begin(), A.row_offsets().end()},
                      {A.col_indices().begin(), A.col_indices().end()}, std::move(vals));
}

inline double ref_f(LossFamily family, double u) {
  switch (family) {
    case LossFamily::Exp:
      return std::exp(u);
    case LossFamily::Cosh:
      return std::cosh(u);
    case LossFamily::Sinh:
      return std::sinh(u);
  }
  return 0.0;
}

/// Element-wise loop over the dense matrix.
inline double reference_loss(const ProblemInstance& inst, const DenseVector& x) {
  const Eigen::VectorXd u = dense(inst.A()) * dense(x);
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double r = ref_f(inst.family(), u(i)) - inst.b()[k];
    const double wu = inst.w()[k] * u(i);
    s += 0.5 * r * r + 0.5 * wu * wu;
  }
  return s;
}

/// Random x rescaled so that ||Ax||_inf equals `target`.
inline DenseVector random_x_with_bound(const SparseMatrix& A, Rng& rng, double target) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(A.n_cols()));
  for (auto& v : x) v = rng.normal();
  const double m = (dense(A) * x).cwiseAbs().maxCoeff();
  if (m > 0.0) x *= target / m;
  return from_eigen(x);
}

// Weights satisfying the family's condition with the given slack on w^2.
inline ProblemInstance certified_instance(LossFamily family, Rng& rng, std::size_t n, std::size_t d, double l,
                                          double slack) {
  auto A = random_sparse(n, d, 0.6, rng);
  auto b = random_vector(n, rng, -1.5, 1.5);
  const double smin = Eigen::JacobiSVD<Eigen::MatrixXd>(dense(A)).singularValues().minCoeff();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::sqrt(std::max(0.5 * b[i] * b[i] + l / (smin * smin) + family_constant(family) + slack, slack));
  }
  return ProblemInstance(std::move(A), std::move(b), DenseVector(std::move(w)), family, l);
}

}  // namespace hyperreg::testing
