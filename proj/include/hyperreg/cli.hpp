#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hyperreg/linalg.hpp"
#include "hyperreg/losses.hpp"
#include "hyperreg/newton.hpp"

namespace hyperreg {

enum class OptimumMode { Zero, Random };

/// Synthetic instance recipe, "n,d,nnz,scale,mode" on the command line.
struct SynthSpec {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t nnz_per_row = 0;
  double entry_scale = 1.0;
  OptimumMode optimum_mode = OptimumMode::Random;
  std::uint64_t seed = 0;

  /// Throws ContractViolation on malformed text or n < d, nnz_per_row
  /// outside [1, d], entry_scale <= 0.
  static SynthSpec parse(std::string_view text, std::uint64_t seed);
  void validate() const;
};

struct SyntheticInstance {
  SparseMatrix A;
  DenseVector b;
};

/// Random sparse A with nnz_per_row entries per row drawn uniformly from
/// [-entry_scale, entry_scale], regenerated until it has full column rank.
/// Zero mode sets b_i = f(0) so the unregularized fit is exact at x = 0 and
/// x* = 0 for every w. Random mode sets b = f(A x_true), x_true uniform in
/// [-0.5, 0.5]^d. All draws come from Philox4x32(seed).
SyntheticInstance generate_synthetic(const SynthSpec& spec, LossFamily family);

/// w_i = sqrt(max(0.5 b_i^2 + l / sigma_min(A)^2 + family_constant + slack, slack)).
/// With slack > 0 the result is nudged up by ulps where rounding would break
/// the strict weight condition. Throws RankDeficient when sigma_min(A) == 0.
DenseVector auto_weight(const SparseMatrix& A, const DenseVector& b, LossFamily family, double l, double slack);

struct RunConfig {
  std::optional<std::string> matrix_path;
  std::optional<SynthSpec> synth;
  std::optional<std::string> b_path;
  std::optional<std::string> w_path;
  /// Used when no w file is given; defaults to 0.01 in that case.
  std::optional<double> auto_weight_slack;
  std::optional<std::string> x0_path;
  LossFamily family = LossFamily::Exp;
  double l = 1.0;
  double eps = 1e-6;
  double delta = 0.05;
  double eps_h = 0.01;
  std::uint64_t seed = 0;
  SolveMode mode = SolveMode::Sketched;
  std::size_t max_iters = 50;
  double grad_tol = 1e-8;
  /// Overrides the measured Lipschitz radius.
  std::optional<double> radius;
  bool verify = false;
  std::optional<std::string> output_path;
  /// Writes A.mtx, b.txt and w.txt of the loaded instance into this directory.
  std::optional<std::string> write_instance_dir;

  /// Throws ContractViolation on conflicting input sources and IoError when a
  /// named input path is not readable.
  void validate() const;
};

/// Reads or generates A and b, then reads or derives w. Throws ParseError,
/// IoError, ContractViolation (dimension mismatch naming the file) or
/// RankDeficient (auto weights on a rank-deficient A).
ProblemInstance load_instance(const RunConfig& cfg);

int exit_code(SolveStatus status);

struct RunResult {
  int exit_code;
  nlohmann::ordered_json report;
};

/// Loads, certifies, solves and builds the report without writing it.
/// Usage and IO errors propagate as exceptions.
RunResult execute(const RunConfig& cfg);

/// execute() plus output: the report goes to cfg.output_path (atomically) or
/// stdout. Errors are printed to stderr and mapped to exit code 1.
int run(const RunConfig& cfg);

/// JSON text with every floating-point number printed with 17 significant digits.
std::string dump_report(const nlohmann::ordered_json& report);

}  // namespace hyperreg
