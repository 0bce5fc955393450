// Command-line front end: load or synthesize an instance, certify it, solve
// it with the (sketched) Newton method and emit a JSON report.
//
// Exit codes: 0 converged, 1 usage/IO error, 2 certificate failed,
// 3 iteration limit, 4 overflow.

#include <iostream>

#include <CLI11.hpp>

#include "hyperreg/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Regularized exp/cosh/sinh regression with a leverage-score sketched Newton method"};

  std::string matrix, synth, b, w, x0, out, write_instance, family = "exp", mode = "sketched";
  double auto_weight = 0.0, radius = 0.0;
  hyperreg::RunConfig cfg;

  auto* matrix_opt = app.add_option("--matrix", matrix, "Design matrix, Matrix Market coordinate real general");
  auto* synth_opt = app.add_option("--synth", synth, "Synthetic instance n,d,nnz,scale,zero|random");
  matrix_opt->excludes(synth_opt);
  auto* b_opt = app.add_option("--b", b, "Target vector, one value per line");
  auto* w_opt = app.add_option("--w", w, "Weight vector, one value per line");
  auto* aw_opt = app.add_option("--auto-weight", auto_weight, "Derive weights from the weight condition plus SLACK");
  w_opt->excludes(aw_opt);
  auto* x0_opt = app.add_option("--x0", x0, "Starting point (default: zero vector)");
  app.add_option("--family", family, "Loss family")->check(CLI::IsMember({"exp", "cosh", "sinh"}));
  app.add_option("--l", cfg.l, "Convexity margin l > 0");
  app.add_option("--eps", cfg.eps, "Target accuracy in (0, 0.1)");
  app.add_option("--delta", cfg.delta, "Failure probability in (0, 0.1)");
  app.add_option("--eps-h", cfg.eps_h, "Hessian sketch accuracy in (0, 0.5)");
  app.add_option("--mode", mode, "Newton variant")->check(CLI::IsMember({"exact", "sketched"}));
  app.add_option("--seed", cfg.seed, "Sampling and synthesis seed");
  app.add_option("--max-iters", cfg.max_iters, "Iteration limit");
  app.add_option("--grad-tol", cfg.grad_tol, "Gradient-norm stopping tolerance");
  auto* radius_opt = app.add_option("--radius", radius, "Override the radius R used for M = exp(6 R^2)");
  app.add_flag("--verify", cfg.verify, "Add finite-difference and quadrature spot checks to the report");
  auto* out_opt = app.add_option("--out", out, "Report path (default: stdout)");
  auto* wi_opt = app.add_option("--write-instance", write_instance, "Write A.mtx, b.txt, w.txt to this directory");

  try {
    app.parse(argc, argv);
    if (*matrix_opt) cfg.matrix_path = matrix;
    if (*synth_opt) cfg.synth = hyperreg::SynthSpec::parse(synth, cfg.seed);
    if (*b_opt) cfg.b_path = b;
    if (*w_opt) cfg.w_path = w;
    if (*aw_opt) cfg.auto_weight_slack = auto_weight;
    if (*x0_opt) cfg.x0_path = x0;
    if (*radius_opt) cfg.radius = radius;
    if (*out_opt) cfg.output_path = out;
    if (*wi_opt) cfg.write_instance_dir = write_instance;
    cfg.family = hyperreg::parse_loss_family(family);
    cfg.mode = hyperreg::parse_solve_mode(mode);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return hyperreg::run(cfg);
}
