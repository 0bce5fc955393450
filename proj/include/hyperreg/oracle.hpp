#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hyperreg/linalg.hpp"
#include "hyperreg/losses.hpp"

namespace hyperreg {

// Independent checks used by the test suites and the CLI --verify mode. None
// of these go through the analytic Newton machinery except reference_optimum.

inline constexpr double kFdGradientStep = 1e-5;
inline constexpr double kFdHessianStep = 1e-4;

/// Central differences of eval_loss along each coordinate.
DenseVector fd_gradient(const ProblemInstance& inst, const DenseVector& x, double h = kFdGradientStep);

/// Central differences of the analytic gradient, symmetrized.
DenseSymmetric fd_hessian(const ProblemInstance& inst, const DenseVector& x, double h = kFdHessianStep);

/// Exact Newton from x0 until ||g|| <= 1e-12 (1 + ||b||), followed by up to
/// two polishing steps that are kept only while they lower ||g||.
/// Throws OracleFailed after 200 iterations without reaching the tolerance.
DenseVector reference_optimum(const ProblemInstance& inst, const DenseVector& x0);

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

/// n-point Gauss-Legendre rule mapped to [0, 1].
GaussLegendreRule gauss_legendre(std::size_t n_points);

/// Relative error between g(y) - g(x) and the quadrature of
/// int_0^1 H(x + t (y - x)) (y - x) dt. Returns 0 when both sides vanish.
double integral_identity_check(const ProblemInstance& inst, const DenseVector& x, const DenseVector& y,
                               std::size_t n_points);

/// ||a - b|| / max(||a||, ||b||), 0 when both are zero.
double relative_error(std::span<const double> a, std::span<const double> b);

/// Empirical Hessian Lipschitz constant around `center`: the largest
/// ||H(y) - H(center)|| / ||y - center|| over `probes` points y drawn on the
/// sphere of the given radius (Philox stream `seed`).
double local_lipschitz_estimate(const ProblemInstance& inst, const DenseVector& center, double radius,
                                std::size_t probes, std::uint64_t seed);

}  // namespace hyperreg
