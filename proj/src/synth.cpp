#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "hyperreg/cli.hpp"
#include "hyperreg/errors.hpp"
#include "hyperreg/philox.hpp"

namespace hyperreg {

namespace {

// Philox streams, one per purpose; the attempt number goes in the high half.
constexpr std::uint64_t kColumnStream = 1;
constexpr std::uint64_t kValueStream = 2;
constexpr std::uint64_t kOptimumStream = 3;

std::uint64_t stream_id(std::uint64_t purpose, std::uint64_t attempt) { return purpose | (attempt << 32); }

double family_at_zero(LossFamily family) { return family == LossFamily::Sinh ? 0.0 : 1.0; }

double apply_family(LossFamily family, double u) {
  switch (family) {
    case LossFamily::Exp:
      return std::exp(u);
    case LossFamily::Cosh:
      return std::cosh(u);
    case LossFamily::Sinh:
      return std::sinh(u);
  }
  return 0.0;
}

}  // namespace

void SynthSpec::validate() const {
  if (d < 1 || n < d) throw ContractViolation("synth: need n >= d >= 1");
  if (nnz_per_row < 1 || nnz_per_row > d) throw ContractViolation("synth: nnz per row must lie in [1, d]");
  if (!(entry_scale > 0.0) || !std::isfinite(entry_scale)) throw ContractViolation("synth: scale must be positive");
}

SynthSpec SynthSpec::parse(std::string_view text, std::uint64_t seed) {
  std::vector<std::string> parts;
  std::stringstream in{std::string(text)};
  for (std::string part; std::getline(in, part, ',');) parts.push_back(part);
  if (parts.size() != 5) throw ContractViolation("synth: expected n,d,nnz,scale,mode, got '" + std::string(text) + "'");

  SynthSpec spec;
  try {
    std::size_t pos = 0;
    spec.n = std::stoull(parts[0], &pos);
    if (pos != parts[0].size()) throw std::invalid_argument(parts[0]);
    spec.d = std::stoull(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument(parts[1]);
    spec.nnz_per_row = std::stoull(parts[2], &pos);
    if (pos != parts[2].size()) throw std::invalid_argument(parts[2]);
    spec.entry_scale = std::stod(parts[3], &pos);
    if (pos != parts[3].size()) throw std::invalid_argument(parts[3]);
  } catch (const std::exception&) {
    throw ContractViolation("synth: malformed number in '" + std::string(text) + "'");
  }
  if (parts[4] == "zero") {
    spec.optimum_mode = OptimumMode::Zero;
  } else if (parts[4] == "random") {
    spec.optimum_mode = OptimumMode::Random;
  } else {
    throw ContractViolation("synth: mode must be zero or random, got '" + parts[4] + "'");
  }
  spec.seed = seed;
  spec.validate();
  return spec;
}

SyntheticInstance generate_synthetic(const SynthSpec& spec, LossFamily family) {
  spec.validate();
  const Philox4x32 rng(spec.seed);

  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    std::vector<std::size_t> offsets{0};
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    std::vector<std::size_t> perm(spec.d);
    std::uint64_t col_counter = 0;
    std::uint64_t val_counter = 0;
    for (std::size_t i = 0; i < spec.n; ++i) {
      for (std::size_t j = 0; j < spec.d; ++j) perm[j] = j;
      // Partial Fisher-Yates picks nnz_per_row distinct columns.
      for (std::size_t k = 0; k < spec.nnz_per_row; ++k) {
        const double u = rng.uniform(col_counter++, stream_id(kColumnStream, attempt));
        const std::size_t pick = k + static_cast<std::size_t>(u * static_cast<double>(spec.d - k));
        std::swap(perm[k], perm[pick]);
      }
      std::vector<std::size_t> row(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(spec.nnz_per_row));
      std::sort(row.begin(), row.end());
      for (std::size_t c : row) {
        double v = 0.0;
        while (v == 0.0) v = (2.0 * rng.uniform(val_counter++, stream_id(kValueStream, attempt)) - 1.0) * spec.entry_scale;
        cols.push_back(c);
        vals.push_back(v);
      }
      offsets.push_back(vals.size());
    }
    SparseMatrix A(spec.n, spec.d, std::move(offsets), std::move(cols), std::move(vals));
    const auto sv = extreme_singular_values(A);
    if (!(sv.sigma_min > 1e-8 * sv.sigma_max)) continue;

    std::vector<double> b(spec.n, family_at_zero(family));
    if (spec.optimum_mode == OptimumMode::Random) {
      std::vector<double> x_true(spec.d);
      for (std::size_t j = 0; j < spec.d; ++j) x_true[j] = rng.uniform(j, stream_id(kOptimumStream, attempt)) - 0.5;
      const DenseVector u = spmv(A, DenseVector(std::move(x_true)));
      for (std::size_t i = 0; i < spec.n; ++i) b[i] = apply_family(family, u[i]);
    }
    return {std::move(A), DenseVector(std::move(b))};
  }
  throw RankDeficient("synth: no full-column-rank matrix after 100 attempts");
}

DenseVector auto_weight(const SparseMatrix& A, const DenseVector& b, LossFamily family, double l, double slack) {
  if (b.size() != A.n_rows()) throw ContractViolation("auto_weight: b length does not match A");
  if (!(slack >= 0.0)) throw ContractViolation("auto_weight: slack must be non-negative");
  const double sigma_min = extreme_singular_values(A).sigma_min;
  if (!(sigma_min > 0.0)) throw RankDeficient("auto_weight: sigma_min(A) = 0");
  const double base = l / (sigma_min * sigma_min) + family_constant(family);
  std::vector<double> w(A.n_rows());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double threshold = 0.5 * b[i] * b[i] + base;
    double wi = std::sqrt(std::max(threshold + slack, slack));
    if (slack > 0.0) {
      while (!(wi * wi > threshold)) wi = std::nextafter(wi, INFINITY);
    }
    w[i] = wi;
  }
  return DenseVector(std::move(w));
}

}  // namespace hyperreg
