#include "hyperreg/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "hyperreg/errors.hpp"
#include "hyperreg/philox.hpp"

namespace hyperreg {

void SketchParams::validate() const {
  if (!(eps_h > 0.0 && eps_h < 0.5)) throw ContractViolation("SketchParams: eps_h must lie in (0, 0.5)");
  if (!(delta > 0.0 && delta < 1.0)) throw ContractViolation("SketchParams: delta must lie in (0, 1)");
  if (!(oversample_c > 0.0) || !std::isfinite(oversample_c)) {
    throw ContractViolation("SketchParams: oversample_c must be positive");
  }
}

DenseVector SketchedDiagonal::densify() const {
  std::vector<double> out(n, 0.0);
  for (const auto& e : entries) out[e.row] = e.weight;
  return DenseVector(std::move(out));
}

DenseVector leverage_scores(const SparseMatrix& A, const DenseVector& d) {
  if (d.size() != A.n_rows()) {
    throw ContractViolation("leverage_scores: d has length " + std::to_string(d.size()) + ", A has " +
                            std::to_string(A.n_rows()) + " rows");
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) {
      throw PreconditionViolated("leverage_scores: diagonal must be positive, d[" + std::to_string(i) +
                                 "] = " + std::to_string(d[i]));
    }
  }
  const DenseSymmetric gram = weighted_gram(A, d);
  std::optional<Cholesky> chol;
  try {
    chol.emplace(gram);
  } catch (const NotPositiveDefinite& e) {
    throw RankDeficient(std::string("leverage_scores: A^T D A is singular: ") + e.what());
  }

  std::vector<double> tau(A.n_rows(), 0.0);
  std::vector<double> z(A.n_cols());
  for (std::size_t i = 0; i < A.n_rows(); ++i) {
    const auto cols = A.row_cols(i);
    if (cols.empty()) continue;
    const auto vals = A.row_values(i);
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t k = 0; k < cols.size(); ++k) z[cols[k]] = vals[k];
    chol->solve_lower(z);
    double s = 0.0;
    for (double v : z) s += v * v;
    tau[i] = std::clamp(d[i] * s, 0.0, 1.0);
  }
  return DenseVector(std::move(tau));
}

double sample_budget(std::size_t n, std::size_t d, const SketchParams& params) {
  return params.oversample_c * static_cast<double>(d) * std::log(static_cast<double>(n) / params.delta) /
         (params.eps_h * params.eps_h);
}

SketchedDiagonal subsample(const SparseMatrix& A, const DenseVector& d, const SketchParams& params) {
  params.validate();
  const DenseVector tau = leverage_scores(A, d);
  const double rate =
      params.oversample_c * std::log(static_cast<double>(A.n_rows()) / params.delta) / (params.eps_h * params.eps_h);
  const Philox4x32 rng(params.seed);

  SketchedDiagonal out;
  out.n = A.n_rows();
  out.target_eps = params.eps_h;
  out.target_delta = params.delta;
  for (std::size_t i = 0; i < A.n_rows(); ++i) {
    const double p = std::min(1.0, rate * tau[i]);
    if (p >= 1.0) {
      out.entries.push_back({i, d[i]});
    } else if (p > 0.0 && rng.uniform(i, params.stream) < p) {
      out.entries.push_back({i, d[i] / p});
    }
  }
  return out;
}

SandwichResult spectral_sandwich_check(const SparseMatrix& A, const DenseVector& d, const SketchedDiagonal& sketch) {
  if (sketch.n != A.n_rows()) throw ContractViolation("spectral_sandwich_check: sketch size does not match A");
  const DenseSymmetric exact = weighted_gram(A, d);
  const Cholesky chol(exact);
  const DenseSymmetric approx = weighted_gram(A, sketch.densify());
  const double eps = spectral_norm(chol.whiten(subtract(approx, exact)));
  return {eps <= sketch.target_eps, eps};
}

}  // namespace hyperreg
