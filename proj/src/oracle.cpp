#include "hyperreg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hyperreg/errors.hpp"
#include "hyperreg/newton.hpp"
#include "hyperreg/philox.hpp"

namespace hyperreg {

namespace {

DenseVector shifted(const DenseVector& x, std::size_t i, double h) {
  std::vector<double> v(x.values());
  v[i] += h;
  return DenseVector(std::move(v));
}

void require_step(double h) {
  if (!(h > 0.0)) throw ContractViolation("finite-difference step must be positive");
}

}  // namespace

double relative_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractViolation("relative_error: length mismatch");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const double scale = std::max(norm2(a), norm2(b));
  if (scale == 0.0) return 0.0;
  return norm2(diff) / scale;
}

DenseVector fd_gradient(const ProblemInstance& inst, const DenseVector& x, double h) {
  require_step(h);
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    g[i] = (eval_loss(inst, shifted(x, i, h)) - eval_loss(inst, shifted(x, i, -h))) / (2.0 * h);
  }
  return DenseVector(std::move(g));
}

DenseSymmetric fd_hessian(const ProblemInstance& inst, const DenseVector& x, double h) {
  require_step(h);
  const std::size_t n = x.size();
  std::vector<double> H(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    const DenseVector gp = gradient(inst, shifted(x, j, h));
    const DenseVector gm = gradient(inst, shifted(x, j, -h));
    for (std::size_t i = 0; i < n; ++i) H[i * n + j] = (gp[i] - gm[i]) / (2.0 * h);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (H[i * n + j] + H[j * n + i]);
      H[i * n + j] = avg;
      H[j * n + i] = avg;
    }
  }
  return DenseSymmetric(n, std::move(H));
}

DenseVector reference_optimum(const ProblemInstance& inst, const DenseVector& x0) {
  const double tol = 1e-12 * (1.0 + norm2(inst.b().span()));
  DenseVector x = x0;
  for (int it = 0; it < 200; ++it) {
    if (norm2(gradient(inst, x).span()) <= tol) {
      double best = norm2(gradient(inst, x).span());
      for (int polish = 0; polish < 2; ++polish) {
        DenseVector cand = exact_step(inst, x);
        const double gn = norm2(gradient(inst, cand).span());
        if (!(gn < best)) break;
        best = gn;
        x = std::move(cand);
      }
      return x;
    }
    x = exact_step(inst, x);
  }
  throw OracleFailed("reference_optimum: no convergence within 200 Newton iterations (||g|| = " +
                     std::to_string(norm2(gradient(inst, x).span())) + ")");
}

GaussLegendreRule gauss_legendre(std::size_t n_points) {
  if (n_points == 0) throw ContractViolation("gauss_legendre: need at least one point");
  GaussLegendreRule rule{std::vector<double>(n_points), std::vector<double>(n_points)};
  const double n = static_cast<double>(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double t = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = t;
      for (std::size_t k = 2; k <= n_points; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * t * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) <= 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = t;
    for (std::size_t k = 2; k <= n_points; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * t * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (t * p1 - p0) / (t * t - 1.0);
    const double w = 2.0 / ((1.0 - t * t) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - t);
    rule.weights[i] = 0.5 * w;
  }
  return rule;
}

double integral_identity_check(const ProblemInstance& inst, const DenseVector& x, const DenseVector& y,
                               std::size_t n_points) {
  const DenseVector dir = subtract(y, x);
  const DenseVector lhs = subtract(gradient(inst, y), gradient(inst, x));
  const GaussLegendreRule rule = gauss_legendre(n_points);
  std::vector<double> rhs(inst.d(), 0.0);
  for (std::size_t q = 0; q < n_points; ++q) {
    const DenseVector hv = symv(hessian(inst, axpy(x, rule.nodes[q], dir)), dir);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += rule.weights[q] * hv[i];
  }
  return relative_error(lhs.span(), rhs);
}

double local_lipschitz_estimate(const ProblemInstance& inst, const DenseVector& center, double radius,
                                std::size_t probes, std::uint64_t seed) {
  if (!(radius > 0.0)) throw ContractViolation("local_lipschitz_estimate: radius must be positive");
  const Philox4x32 rng(seed);
  const DenseSymmetric h0 = hessian(inst, center);
  double best = 0.0;
  std::uint64_t counter = 0;
  for (std::size_t p = 0; p < probes; ++p) {
    // Box-Muller normals give a uniformly random direction.
    std::vector<double> dir(inst.d());
    for (auto& v : dir) {
      const double u1 = 1.0 - rng.uniform(counter++);
      const double u2 = rng.uniform(counter++);
      v = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    const double len = norm2(dir);
    if (len == 0.0) continue;
    for (auto& v : dir) v *= radius / len;
    const DenseVector step(std::move(dir));
    const DenseVector y = axpy(center, 1.0, step);
    const double ratio = spectral_norm(subtract(hessian(inst, y), h0)) / norm2(step.span());
    best = std::max(best, ratio);
  }
  return best;
}

}  // namespace hyperreg
