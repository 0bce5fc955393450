#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hyperreg/linalg.hpp"

namespace hyperreg {

struct SketchParams {
  double eps_h = 0.01;
  double delta = 0.05;
  std::uint64_t seed = 0;
  double oversample_c = 40.0;
  /// Selects an independent family of row streams under the same seed; the
  /// Newton driver uses the iteration index.
  std::uint64_t stream = 0;

  /// Throws ContractViolation unless eps_h in (0, 0.5), delta in (0, 1), oversample_c > 0.
  void validate() const;
};

struct SketchEntry {
  std::size_t row;
  double weight;

  friend bool operator==(const SketchEntry&, const SketchEntry&) = default;
};

/// Sparse diagonal D~ such that A^T D~ A approximates A^T D A.
struct SketchedDiagonal {
  /// Sorted by row, weights > 0.
  std::vector<SketchEntry> entries;
  std::size_t n = 0;
  double target_eps = 0.0;
  double target_delta = 0.0;

  std::size_t nnz() const { return entries.size(); }
  DenseVector densify() const;

  friend bool operator==(const SketchedDiagonal&, const SketchedDiagonal&) = default;
};

struct SandwichResult {
  bool holds;
  double observed_eps;
};

/// tau_i = d_i a_i^T (A^T D A)^{-1} a_i, clamped to [0, 1].
/// Throws PreconditionViolated if some d_i <= 0 and RankDeficient if the Gram
/// matrix is singular.
DenseVector leverage_scores(const SparseMatrix& A, const DenseVector& d);

/// oversample_c * d * ln(n / delta) / eps_h^2: the expected-sample budget.
double sample_budget(std::size_t n, std::size_t d, const SketchParams& params);

/// Independent Bernoulli row sampling with p_i = min(1, c tau_i ln(n/delta) / eps_h^2).
/// Kept rows get weight d_i / p_i. Row i's coin is Philox4x32(seed) at
/// counter {i, stream}, so the output depends only on (A, d, params).
SketchedDiagonal subsample(const SparseMatrix& A, const DenseVector& d, const SketchParams& params);

/// eps_obs = || H^{-1/2} (H~ - H) H^{-1/2} || with H = A^T D A and H~ = A^T D~ A.
/// Throws NotPositiveDefinite if H is not positive definite.
SandwichResult spectral_sandwich_check(const SparseMatrix& A, const DenseVector& d, const SketchedDiagonal& sketch);

}  // namespace hyperreg
