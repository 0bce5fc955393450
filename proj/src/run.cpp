#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hyperreg/cli.hpp"
#include "hyperreg/errors.hpp"
#include "hyperreg/io.hpp"
#include "hyperreg/oracle.hpp"

namespace hyperreg {

namespace {

using json = nlohmann::ordered_json;

constexpr double kMinRadius = 2.000001;
constexpr std::size_t kVerifyQuadraturePoints = 64;

void require_readable(const std::optional<std::string>& path, const char* flag) {
  if (!path) return;
  std::ifstream in(*path);
  if (!in) throw IoError(std::string(flag) + ": cannot read '" + *path + "'");
}

DenseVector read_sized(const std::string& path, std::size_t n, const char* what) {
  DenseVector v = read_vector(path);
  if (v.size() != n) {
    throw ContractViolation(std::string(what) + " file '" + path + "' has " + std::to_string(v.size()) +
                            " values, expected " + std::to_string(n));
  }
  return v;
}

json to_json(const DenseVector& v) { return json(v.values()); }

json condition_json(const ConditionReport& rep) {
  json failing = json::array();
  for (std::size_t i : rep.failing_indices) failing.push_back(i);
  return {{"family", std::string(to_string(rep.family))},
          {"holds", rep.holds},
          {"strict", true},
          {"family_constant", family_constant(rep.family)},
          {"l", rep.l},
          {"sigma_min", rep.sigma_min},
          {"min_margin", rep.min_margin},
          {"failing_count", rep.failing_indices.size()},
          {"failing_indices", failing}};
}

json config_json(const RunConfig& cfg, const ProblemInstance& inst) {
  json input;
  if (cfg.synth) {
    input = {{"synth",
              {{"n", cfg.synth->n},
               {"d", cfg.synth->d},
               {"nnz_per_row", cfg.synth->nnz_per_row},
               {"entry_scale", cfg.synth->entry_scale},
               {"optimum_mode", cfg.synth->optimum_mode == OptimumMode::Zero ? "zero" : "random"}}}};
  } else {
    input = {{"matrix", *cfg.matrix_path}, {"b", *cfg.b_path}};
  }
  if (cfg.w_path) {
    input["w"] = *cfg.w_path;
  } else {
    input["auto_weight_slack"] = cfg.auto_weight_slack.value_or(0.01);
  }
  if (cfg.x0_path) input["x0"] = *cfg.x0_path;
  json out = {{"input", input},
              {"n", inst.n()},
              {"d", inst.d()},
              {"nnz", inst.A().nnz()},
              {"family", std::string(to_string(cfg.family))},
              {"l", cfg.l},
              {"eps", cfg.eps},
              {"delta", cfg.delta},
              {"eps_h", cfg.eps_h},
              {"mode", std::string(to_string(cfg.mode))},
              {"seed", cfg.seed},
              {"max_iters", cfg.max_iters},
              {"grad_tol", cfg.grad_tol},
              {"verify", cfg.verify}};
  if (cfg.radius) out["radius_override"] = *cfg.radius;
  return out;
}

// Spot checks of the analytic derivatives against the independent oracles.
json verify_json(const ProblemInstance& inst, const DenseVector& x0, const DenseVector& x_final) {
  json out;
  auto guarded = [](auto&& fn) -> json {
    try {
      return fn();
    } catch (const Error& e) {
      return {{"error", e.what()}};
    }
  };
  auto point_checks = [&](const DenseVector& x) {
    return guarded([&]() -> json {
      const double g_err = relative_error(gradient(inst, x).span(), fd_gradient(inst, x).span());
      const double h_err = relative_error(hessian(inst, x).values(), fd_hessian(inst, x).values());
      return {{"fd_gradient_rel_error", g_err}, {"fd_hessian_rel_error", h_err}};
    });
  };
  out["at_x0"] = point_checks(x0);
  out["at_final_x"] = point_checks(x_final);
  out["integral_identity"] = guarded([&]() -> json {
    return {{"points", kVerifyQuadraturePoints},
            {"rel_error", integral_identity_check(inst, x0, x_final, kVerifyQuadraturePoints)}};
  });
  return out;
}

}  // namespace

int exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return 0;
    case SolveStatus::CertificateFailed:
      return 2;
    case SolveStatus::MaxIters:
      return 3;
    case SolveStatus::Overflow:
      return 4;
  }
  return 1;
}

void RunConfig::validate() const {
  if (matrix_path.has_value() == synth.has_value()) {
    throw ContractViolation("exactly one of --matrix and --synth is required");
  }
  if (matrix_path && !b_path) throw ContractViolation("--matrix requires --b");
  if (synth && b_path) throw ContractViolation("--b cannot be combined with --synth");
  if (w_path && auto_weight_slack) throw ContractViolation("--w and --auto-weight are mutually exclusive");
  if (auto_weight_slack && !(*auto_weight_slack >= 0.0)) throw ContractViolation("--auto-weight must be >= 0");
  if (!(l > 0.0) || !std::isfinite(l)) throw ContractViolation("--l must be positive");
  if (radius && !(*radius > 2.0)) throw ContractViolation("--radius must exceed 2");
  if (synth) synth->validate();
  SolverConfig{eps, delta, eps_h, 40.0, max_iters, grad_tol, seed, mode, std::nullopt}.validate();
  require_readable(matrix_path, "--matrix");
  require_readable(b_path, "--b");
  require_readable(w_path, "--w");
  require_readable(x0_path, "--x0");
}

ProblemInstance load_instance(const RunConfig& cfg) {
  cfg.validate();
  SparseMatrix A;
  std::optional<DenseVector> b;
  if (cfg.synth) {
    SyntheticInstance s = generate_synthetic(*cfg.synth, cfg.family);
    A = std::move(s.A);
    b = std::move(s.b);
  } else {
    A = read_matrix_market(*cfg.matrix_path);
    b = read_sized(*cfg.b_path, A.n_rows(), "b");
  }
  DenseVector w = cfg.w_path ? read_sized(*cfg.w_path, A.n_rows(), "w")
                             : auto_weight(A, *b, cfg.family, cfg.l, cfg.auto_weight_slack.value_or(0.01));
  return ProblemInstance(std::move(A), std::move(*b), std::move(w), cfg.family, cfg.l);
}

RunResult execute(const RunConfig& cfg) {
  cfg.validate();
  std::optional<ProblemInstance> loaded;
  try {
    loaded.emplace(load_instance(cfg));
  } catch (const RankDeficient& e) {
    // Auto weights need sigma_min(A) > 0; that is a certificate failure, not a usage error.
    json rep = {{"status", std::string(to_string(SolveStatus::CertificateFailed))}, {"message", e.what()}};
    return {exit_code(SolveStatus::CertificateFailed), rep};
  }
  const ProblemInstance& inst = *loaded;

  if (cfg.write_instance_dir) {
    const std::filesystem::path dir(*cfg.write_instance_dir);
    std::filesystem::create_directories(dir);
    write_matrix_market((dir / "A.mtx").string(), inst.A());
    write_vector((dir / "b.txt").string(), inst.b());
    write_vector((dir / "w.txt").string(), inst.w());
  }

  const DenseVector x0 = cfg.x0_path ? read_sized(*cfg.x0_path, inst.d(), "x0") : DenseVector::zeros(inst.d());

  SolverConfig scfg{cfg.eps, cfg.delta, cfg.eps_h, 40.0, cfg.max_iters, cfg.grad_tol, cfg.seed, cfg.mode, std::nullopt};

  // The reference optimum only feeds diagnostics; failing to find one is not an error.
  json reference = {{"available", false}};
  SingularValueRange sv{0.0, 0.0};
  try {
    sv = extreme_singular_values(inst.A());
  } catch (const UnsupportedShape&) {
  }
  bool certified = false;
  if (sv.sigma_min > 0.0) certified = check_weight_condition(inst, sv.sigma_min).holds;
  if (certified) {
    try {
      scfg.reference = reference_optimum(inst, x0);
      reference = {{"available", true}, {"x", to_json(*scfg.reference)}};
    } catch (const Error& e) {
      reference = {{"available", false}, {"error", e.what()}};
    }
  }

  const SolveReport sr = solve(inst, x0, scfg);

  json iterations = json::array();
  double max_norm = norm2(x0.span());
  for (const auto& it : sr.iterates) {
    json rec = {{"k", it.k}, {"grad_norm", it.grad_norm}, {"step_norm", it.step_norm}};
    if (it.dist_to_ref) rec["dist_to_ref"] = *it.dist_to_ref;
    if (it.sketch_nnz) rec["sketch_nnz"] = *it.sketch_nnz;
    rec["wall_ms"] = it.wall_ms;
    iterations.push_back(rec);
    max_norm = std::max(max_norm, norm2(it.x.span()));
  }

  const double R = cfg.radius.value_or(
      std::max({kMinRadius, sv.sigma_max, norm2(inst.b().span()), norm2(x0.span()), max_norm}));
  json certs = {{"sigma_min", sv.sigma_min},
                {"sigma_max", sv.sigma_max},
                {"R_used", R},
                {"log_lipschitz_M", log_lipschitz_bound(R)},
                {"lipschitz_M", lipschitz_bound(R)}};
  if (sr.certificates) certs["weight_condition"] = condition_json(*sr.certificates);
  if (scfg.reference) certs["good_start"] = good_start_check(inst, x0, RadiusBundle::from_radius(R), *scfg.reference);

  json rep = {{"status", std::string(to_string(sr.status))},
              {"message", sr.message},
              {"iteration_count", sr.iterations()},
              {"iterations", iterations},
              {"final_x", to_json(sr.final_x)},
              {"contraction_ratios", sr.contraction_ratios},
              {"config", config_json(cfg, inst)},
              {"certificates", certs},
              {"reference_optimum", reference}};
  if (cfg.verify) rep["verify"] = verify_json(inst, x0, sr.final_x);
  return {exit_code(sr.status), rep};
}

int run(const RunConfig& cfg) {
  RunResult result;
  try {
    result = execute(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  const std::string text = dump_report(result.report);
  try {
    if (cfg.output_path) {
      write_file_atomic(*cfg.output_path, text);
    } else {
      std::cout << text;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return result.exit_code;
}

}  // namespace hyperreg
