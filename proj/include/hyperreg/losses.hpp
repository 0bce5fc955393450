#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "hyperreg/linalg.hpp"

namespace hyperreg {

enum class LossFamily { Exp, Cosh, Sinh };

std::string_view to_string(LossFamily family);
/// Parses "exp", "cosh" or "sinh". Throws ContractViolation otherwise.
LossFamily parse_loss_family(std::string_view name);

/// Constant added to the weight threshold: 0 for exp, +1 for cosh, -1 for sinh.
double family_constant(LossFamily family);

/// minimize 0.5 ||f(Ax) - b||^2 + 0.5 ||diag(w) A x||^2 with f chosen by
/// `family`, together with the convexity margin l the certificates target.
class ProblemInstance {
 public:
  /// Throws ContractViolation on inconsistent lengths or l <= 0.
  ProblemInstance(SparseMatrix A, DenseVector b, DenseVector w, LossFamily family, double l);

  const SparseMatrix& A() const { return A_; }
  const DenseVector& b() const { return b_; }
  const DenseVector& w() const { return w_; }
  LossFamily family() const { return family_; }
  double l() const { return l_; }
  std::size_t n() const { return A_.n_rows(); }
  std::size_t d() const { return A_.n_cols(); }

 private:
  SparseMatrix A_;
  DenseVector b_;
  DenseVector w_;
  LossFamily family_;
  double l_;
};

/// Lipschitz constant of the Hessian over the radius-R ball.
struct RadiusBundle {
  double R;
  double M;

  /// Throws PreconditionViolated unless R > 2.
  static RadiusBundle from_radius(double R);
};

/// Diagonal of the Hessian factorization H(x) = A^T diag(d) A.
struct HessianFactor {
  DenseVector d;
};

struct ConditionReport {
  LossFamily family;
  double sigma_min;
  double l;
  /// Per-index lower bound on w_i^2: 0.5 b_i^2 + l / sigma_min^2 + family_constant.
  std::vector<double> thresholds;
  std::vector<bool> satisfied;
  std::vector<std::size_t> failing_indices;
  /// min_i (w_i^2 - threshold_i).
  double min_margin;
  bool holds;
};

double eval_loss(const ProblemInstance& inst, const DenseVector& x);
DenseVector gradient(const ProblemInstance& inst, const DenseVector& x);
HessianFactor hessian_factor(const ProblemInstance& inst, const DenseVector& x);
/// weighted_gram(A, hessian_factor(inst, x).d)
DenseSymmetric hessian(const ProblemInstance& inst, const DenseVector& x);

/// Strict per-index check of w_i^2 > 0.5 b_i^2 + l/sigma_min(A)^2 + c_family.
/// Throws RankDeficient when sigma_min(A) == 0.
ConditionReport check_weight_condition(const ProblemInstance& inst);
/// Same, with a precomputed sigma_min.
ConditionReport check_weight_condition(const ProblemInstance& inst, double sigma_min);

/// exp(6 R^2). Throws PreconditionViolated unless R > 2. The result is +inf
/// once 6 R^2 exceeds the double range; log_lipschitz_bound stays finite.
double lipschitz_bound(double R);
double log_lipschitz_bound(double R);

}  // namespace hyperreg
