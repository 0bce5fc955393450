#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyperreg/linalg.hpp"
#include "hyperreg/losses.hpp"
#include "hyperreg/sketch.hpp"

namespace hyperreg {

enum class SolveMode { Exact, Sketched };
enum class SolveStatus { Converged, MaxIters, CertificateFailed, Overflow };

std::string_view to_string(SolveMode mode);
std::string_view to_string(SolveStatus status);
SolveMode parse_solve_mode(std::string_view name);

struct SolverConfig {
  /// Target accuracy, in (0, 0.1).
  double eps = 1e-6;
  /// Total failure probability, in (0, 0.1). Split evenly over max_iters sketches.
  double delta = 0.05;
  double eps_h = 0.01;
  double oversample_c = 40.0;
  std::size_t max_iters = 50;
  double grad_tol = 1e-8;
  std::uint64_t seed = 0;
  SolveMode mode = SolveMode::Sketched;
  /// Known optimum. When set, every IterateRecord carries its distance to it
  /// and SolveReport::contraction_ratios is filled.
  std::optional<DenseVector> reference;

  void validate() const;
};

/// One point of the trajectory. step_norm and sketch_nnz describe the step
/// taken *from* x; the last record has no step.
struct IterateRecord {
  std::size_t k;
  DenseVector x;
  double grad_norm;
  double step_norm = 0.0;
  std::optional<double> dist_to_ref;
  std::optional<std::size_t> sketch_nnz;
  double wall_ms = 0.0;
};

struct SolveReport {
  SolveStatus status;
  std::vector<IterateRecord> iterates;
  DenseVector final_x;
  /// r_{k+1} / r_k for consecutive records with r_k > 0.
  std::vector<double> contraction_ratios;
  std::optional<ConditionReport> certificates;
  /// Detail for non-converged statuses.
  std::string message;

  /// Number of Newton steps taken.
  std::size_t iterations() const { return iterates.empty() ? 0 : iterates.size() - 1; }
};

struct ApproxStep {
  DenseVector x_next;
  SketchedDiagonal sketch;
};

/// x - H(x)^{-1} g(x) with the full regularized gradient and Hessian.
DenseVector exact_step(const ProblemInstance& inst, const DenseVector& x);

/// x - H~(x)^{-1} g(x) with H~ = A^T D~ A from subsample(A, D(x), params).
/// Throws PreconditionViolated when some D_i(x) <= 0.
ApproxStep approx_step(const ProblemInstance& inst, const DenseVector& x, const SketchParams& params);

/// M ||x0 - x_ref|| <= 0.1 l.
bool good_start_check(const ProblemInstance& inst, const DenseVector& x0, const RadiusBundle& bundle,
                      const DenseVector& x_ref);

/// 2 (eps_h + M r / (l - M r)) r. Throws PreconditionViolated if M r >= l.
double shrink_bound(double eps_h, double M, double l, double r_k);

/// Pure Newton iteration (sketched or exact Hessian) from x0.
///
/// Stops with Converged once a step of norm <= eps/2 lands on a point whose
/// gradient norm is <= grad_tol, and with MaxIters after max_iters steps.
/// Numerical failures become statuses: a failed weight certificate or a
/// non-positive-definite Hessian yields CertificateFailed, a non-finite loss
/// kernel yields Overflow. Only malformed inputs throw.
SolveReport solve(const ProblemInstance& inst, const DenseVector& x0, const SolverConfig& cfg);

}  // namespace hyperreg
