#include "hyperreg/newton.hpp"

#include <chrono>
#include <cmath>

#include "hyperreg/errors.hpp"

namespace hyperreg {

namespace {

struct StepResult {
  DenseVector step;
  std::optional<std::size_t> sketch_nnz;
};

void require_positive_factor(const DenseVector& d) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) {
      throw PreconditionViolated("Hessian factor D[" + std::to_string(i) + "] = " + std::to_string(d[i]) +
                                 " is not positive; sketching needs a positive diagonal");
    }
  }
}

StepResult newton_direction(const ProblemInstance& inst, const DenseVector& x, const DenseVector& g, SolveMode mode,
                            const SketchParams& params, SketchedDiagonal* sketch_out) {
  const HessianFactor factor = hessian_factor(inst, x);
  if (mode == SolveMode::Exact) return {solve_spd(weighted_gram(inst.A(), factor.d), g), std::nullopt};
  require_positive_factor(factor.d);
  SketchedDiagonal sketch = subsample(inst.A(), factor.d, params);
  DenseVector step = solve_spd(weighted_gram(inst.A(), sketch.densify()), g);
  const std::size_t nnz = sketch.nnz();
  if (sketch_out) *sketch_out = std::move(sketch);
  return {std::move(step), nnz};
}

}  // namespace

std::string_view to_string(SolveMode mode) { return mode == SolveMode::Exact ? "exact" : "sketched"; }

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "Converged";
    case SolveStatus::MaxIters:
      return "MaxIters";
    case SolveStatus::CertificateFailed:
      return "CertificateFailed";
    case SolveStatus::Overflow:
      return "Overflow";
  }
  return "unknown";
}

SolveMode parse_solve_mode(std::string_view name) {
  if (name == "exact") return SolveMode::Exact;
  if (name == "sketched") return SolveMode::Sketched;
  throw ContractViolation("unknown mode '" + std::string(name) + "' (expected exact or sketched)");
}

void SolverConfig::validate() const {
  if (!(eps > 0.0 && eps < 0.1)) throw ContractViolation("SolverConfig: eps must lie in (0, 0.1)");
  if (!(delta > 0.0 && delta < 0.1)) throw ContractViolation("SolverConfig: delta must lie in (0, 0.1)");
  if (max_iters == 0) throw ContractViolation("SolverConfig: max_iters must be positive");
  if (!(grad_tol >= 0.0)) throw ContractViolation("SolverConfig: grad_tol must be non-negative");
  if (mode == SolveMode::Sketched) SketchParams{eps_h, delta, seed, oversample_c, 0}.validate();
}

DenseVector exact_step(const ProblemInstance& inst, const DenseVector& x) {
  const DenseVector g = gradient(inst, x);
  const auto dir = newton_direction(inst, x, g, SolveMode::Exact, {}, nullptr);
  return subtract(x, dir.step);
}

ApproxStep approx_step(const ProblemInstance& inst, const DenseVector& x, const SketchParams& params) {
  const DenseVector g = gradient(inst, x);
  SketchedDiagonal sketch;
  const auto dir = newton_direction(inst, x, g, SolveMode::Sketched, params, &sketch);
  return {subtract(x, dir.step), std::move(sketch)};
}

bool good_start_check(const ProblemInstance& inst, const DenseVector& x0, const RadiusBundle& bundle,
                      const DenseVector& x_ref) {
  return bundle.M * norm2(subtract(x0, x_ref).span()) <= 0.1 * inst.l();
}

double shrink_bound(double eps_h, double M, double l, double r_k) {
  const double mr = M * r_k;
  if (!(mr < l)) throw PreconditionViolated("shrink_bound: requires M * r_k < l");
  return 2.0 * (eps_h + mr / (l - mr)) * r_k;
}

SolveReport solve(const ProblemInstance& inst, const DenseVector& x0, const SolverConfig& cfg) {
  cfg.validate();
  if (x0.size() != inst.d()) {
    throw ContractViolation("solve: x0 has length " + std::to_string(x0.size()) + ", expected " +
                            std::to_string(inst.d()));
  }
  if (cfg.reference && cfg.reference->size() != inst.d()) {
    throw ContractViolation("solve: reference has wrong length");
  }

  SolveReport report{SolveStatus::MaxIters, {}, x0, {}, std::nullopt, {}};

  try {
    report.certificates = check_weight_condition(inst);
  } catch (const RankDeficient& e) {
    report.status = SolveStatus::CertificateFailed;
    report.message = e.what();
    return report;
  }
  if (!report.certificates->holds) {
    report.status = SolveStatus::CertificateFailed;
    report.message = "weight condition fails at " + std::to_string(report.certificates->failing_indices.size()) +
                     " of " + std::to_string(inst.n()) + " indices";
    return report;
  }

  auto dist = [&](const DenseVector& x) -> std::optional<double> {
    if (!cfg.reference) return std::nullopt;
    return norm2(subtract(x, *cfg.reference).span());
  };

  SketchParams params{cfg.eps_h, cfg.delta / static_cast<double>(cfg.max_iters), cfg.seed, cfg.oversample_c, 0};

  DenseVector x = x0;
  try {
    DenseVector g = gradient(inst, x);
    report.iterates.push_back({0, x, norm2(g.span()), 0.0, dist(x), std::nullopt, 0.0});

    for (std::size_t k = 0; k < cfg.max_iters; ++k) {
      const auto t0 = std::chrono::steady_clock::now();
      params.stream = k;
      const StepResult dir = newton_direction(inst, x, g, cfg.mode, params, nullptr);
      DenseVector x_next = subtract(x, dir.step);
      DenseVector g_next = gradient(inst, x_next);
      const auto t1 = std::chrono::steady_clock::now();

      auto& rec = report.iterates.back();
      rec.step_norm = norm2(dir.step.span());
      rec.sketch_nnz = dir.sketch_nnz;
      rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      const double step_norm = rec.step_norm;

      x = std::move(x_next);
      g = std::move(g_next);
      report.iterates.push_back({k + 1, x, norm2(g.span()), 0.0, dist(x), std::nullopt, 0.0});

      if (step_norm <= 0.5 * cfg.eps && report.iterates.back().grad_norm <= cfg.grad_tol) {
        report.status = SolveStatus::Converged;
        break;
      }
    }
    if (report.status == SolveStatus::MaxIters) {
      report.message = "no convergence within " + std::to_string(cfg.max_iters) + " iterations";
    }
  } catch (const Overflow& e) {
    report.status = SolveStatus::Overflow;
    report.message = e.what();
  } catch (const NotPositiveDefinite& e) {
    report.status = SolveStatus::CertificateFailed;
    report.message = std::string("Hessian lost positive definiteness: ") + e.what();
  } catch (const PreconditionViolated& e) {
    report.status = SolveStatus::CertificateFailed;
    report.message = e.what();
  } catch (const RankDeficient& e) {
    report.status = SolveStatus::CertificateFailed;
    report.message = e.what();
  }

  report.final_x = x;
  for (std::size_t k = 0; k + 1 < report.iterates.size(); ++k) {
    const auto& r0 = report.iterates[k].dist_to_ref;
    const auto& r1 = report.iterates[k + 1].dist_to_ref;
    if (r0 && r1 && *r0 > 0.0) report.contraction_ratios.push_back(*r1 / *r0);
  }
  return report;
}

}  // namespace hyperreg
