#include "hyperreg/losses.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hyperreg/errors.hpp"

namespace hyperreg {

namespace {

// f, f' and the second derivative of 0.5 (f(u) - b)^2 at a single u.
struct Pointwise {
  double value;
  double slope;
  double curvature;
};

[[noreturn]] void overflow_at(std::size_t i, double u) {
  throw Overflow("loss kernel overflow at row " + std::to_string(i) + " ((Ax)_i = " + std::to_string(u) +
                 "); the iterate left the radius-R region");
}

// cosh and sinh use one exp call and its reciprocal.
Pointwise pointwise(LossFamily family, double u, double b, std::size_t i) {
  const double e = std::exp(u);
  Pointwise p{};
  switch (family) {
    case LossFamily::Exp:
      if (!std::isfinite(e)) overflow_at(i, u);
      p = {e, e, (2.0 * e - b) * e};
      break;
    case LossFamily::Cosh: {
      const double inv = 1.0 / e;
      if (!std::isfinite(e) || !std::isfinite(inv)) overflow_at(i, u);
      const double c = 0.5 * (e + inv);
      const double s = 0.5 * (e - inv);
      p = {c, s, 2.0 * c * c - b * c - 1.0};
      break;
    }
    case LossFamily::Sinh: {
      const double inv = 1.0 / e;
      if (!std::isfinite(e) || !std::isfinite(inv)) overflow_at(i, u);
      const double c = 0.5 * (e + inv);
      const double s = 0.5 * (e - inv);
      p = {s, c, 2.0 * s * s - b * s + 1.0};
      break;
    }
  }
  if (!std::isfinite(p.curvature) || !std::isfinite(p.slope * (p.value - b))) overflow_at(i, u);
  return p;
}

DenseVector checked(std::vector<double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Overflow(std::string(what) + ": non-finite result");
  }
  return DenseVector(std::move(v));
}

void require_x(const ProblemInstance& inst, const DenseVector& x) {
  if (x.size() != inst.d()) {
    throw ContractViolation("x has length " + std::to_string(x.size()) + ", expected " + std::to_string(inst.d()));
  }
}

}  // namespace

std::string_view to_string(LossFamily family) {
  switch (family) {
    case LossFamily::Exp:
      return "exp";
    case LossFamily::Cosh:
      return "cosh";
    case LossFamily::Sinh:
      return "sinh";
  }
  return "unknown";
}

LossFamily parse_loss_family(std::string_view name) {
  if (name == "exp") return LossFamily::Exp;
  if (name == "cosh") return LossFamily::Cosh;
  if (name == "sinh") return LossFamily::Sinh;
  throw ContractViolation("unknown loss family '" + std::string(name) + "' (expected exp, cosh or sinh)");
}

double family_constant(LossFamily family) {
  switch (family) {
    case LossFamily::Exp:
      return 0.0;
    case LossFamily::Cosh:
      return 1.0;
    case LossFamily::Sinh:
      return -1.0;
  }
  return 0.0;
}

ProblemInstance::ProblemInstance(SparseMatrix A, DenseVector b, DenseVector w, LossFamily family, double l)
    : A_(std::move(A)), b_(std::move(b)), w_(std::move(w)), family_(family), l_(l) {
  if (A_.n_rows() == 0 || A_.n_cols() == 0) throw ContractViolation("ProblemInstance: A must be non-empty");
  if (b_.size() != A_.n_rows()) {
    throw ContractViolation("ProblemInstance: b has length " + std::to_string(b_.size()) + ", A has " +
                            std::to_string(A_.n_rows()) + " rows");
  }
  if (w_.size() != A_.n_rows()) {
    throw ContractViolation("ProblemInstance: w has length " + std::to_string(w_.size()) + ", A has " +
                            std::to_string(A_.n_rows()) + " rows");
  }
  if (!(l_ > 0.0) || !std::isfinite(l_)) throw ContractViolation("ProblemInstance: l must be a positive finite number");
}

RadiusBundle RadiusBundle::from_radius(double R) { return {R, lipschitz_bound(R)}; }

double eval_loss(const ProblemInstance& inst, const DenseVector& x) {
  require_x(inst, x);
  const DenseVector u = spmv(inst.A(), x);
  double fit = 0.0;
  double reg = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Pointwise p = pointwise(inst.family(), u[i], inst.b()[i], i);
    const double r = p.value - inst.b()[i];
    const double wu = inst.w()[i] * u[i];
    fit += r * r;
    reg += wu * wu;
  }
  const double loss = 0.5 * fit + 0.5 * reg;
  if (!std::isfinite(loss)) throw Overflow("eval_loss: non-finite loss");
  return loss;
}

DenseVector gradient(const ProblemInstance& inst, const DenseVector& x) {
  require_x(inst, x);
  const DenseVector u = spmv(inst.A(), x);
  std::vector<double> r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Pointwise p = pointwise(inst.family(), u[i], inst.b()[i], i);
    const double wi = inst.w()[i];
    r[i] = p.slope * (p.value - inst.b()[i]) + wi * wi * u[i];
  }
  return spmv_t(inst.A(), checked(std::move(r), "gradient"));
}

HessianFactor hessian_factor(const ProblemInstance& inst, const DenseVector& x) {
  require_x(inst, x);
  const DenseVector u = spmv(inst.A(), x);
  std::vector<double> d(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double wi = inst.w()[i];
    d[i] = pointwise(inst.family(), u[i], inst.b()[i], i).curvature + wi * wi;
  }
  return {checked(std::move(d), "hessian_factor")};
}

DenseSymmetric hessian(const ProblemInstance& inst, const DenseVector& x) {
  return weighted_gram(inst.A(), hessian_factor(inst, x).d);
}

ConditionReport check_weight_condition(const ProblemInstance& inst) {
  return check_weight_condition(inst, extreme_singular_values(inst.A()).sigma_min);
}

ConditionReport check_weight_condition(const ProblemInstance& inst, double sigma_min) {
  if (!(sigma_min > 0.0)) throw RankDeficient("check_weight_condition: sigma_min(A) = 0");
  ConditionReport rep{inst.family(), sigma_min, inst.l(), {}, {}, {}, std::numeric_limits<double>::infinity(), true};
  const double base = inst.l() / (sigma_min * sigma_min) + family_constant(inst.family());
  rep.thresholds.resize(inst.n());
  rep.satisfied.resize(inst.n());
  for (std::size_t i = 0; i < inst.n(); ++i) {
    const double bi = inst.b()[i];
    const double wi = inst.w()[i];
    const double threshold = 0.5 * bi * bi + base;
    const bool ok = wi * wi > threshold;
    rep.thresholds[i] = threshold;
    rep.satisfied[i] = ok;
    rep.min_margin = std::min(rep.min_margin, wi * wi - threshold);
    if (!ok) {
      rep.failing_indices.push_back(i);
      rep.holds = false;
    }
  }
  return rep;
}

double log_lipschitz_bound(double R) {
  if (!(R > 2.0)) throw PreconditionViolated("lipschitz_bound: requires R > 2, got " + std::to_string(R));
  return 6.0 * R * R;
}

double lipschitz_bound(double R) { return std::exp(log_lipschitz_bound(R)); }

}  // namespace hyperreg
