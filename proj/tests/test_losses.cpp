#include <gtest/gtest.h>

#include <array>

#include "hyperreg/errors.hpp"
#include "hyperreg/losses.hpp"
#include "hyperreg/oracle.hpp"
#include "support.hpp"

using namespace hyperreg;
using hyperreg::testing::dense;
using hyperreg::testing::Rng;

namespace {

constexpr std::array kFamilies{LossFamily::Exp, LossFamily::Cosh, LossFamily::Sinh};

ProblemInstance one_by_one(LossFamily family, double b, double w, double l = 1.0) {
  return ProblemInstance(SparseMatrix::identity(1), DenseVector{b}, DenseVector{w}, family, l);
}

ProblemInstance random_instance(LossFamily family, Rng& rng, std::size_t n, std::size_t d) {
  auto A = hyperreg::testing::random_sparse(n, d, 0.6, rng);
  return ProblemInstance(std::move(A), hyperreg::testing::random_vector(n, rng, -2, 2),
                         hyperreg::testing::random_vector(n, rng, 0, 1.5), family, 0.5);
}

}  // namespace

TEST(ProblemInstance, RejectsInconsistentShapes) {
  EXPECT_THROW(ProblemInstance(SparseMatrix::identity(2), DenseVector{1}, DenseVector{1, 1}, LossFamily::Exp, 1.0),
               ContractViolation);
  EXPECT_THROW(ProblemInstance(SparseMatrix::identity(2), DenseVector{1, 1}, DenseVector{1}, LossFamily::Exp, 1.0),
               ContractViolation);
  EXPECT_THROW(one_by_one(LossFamily::Exp, 0, 0, 0.0), ContractViolation);
  EXPECT_THROW(one_by_one(LossFamily::Exp, 0, 0, -1.0), ContractViolation);
}

TEST(Loss, ParseFamily) {
  EXPECT_EQ(parse_loss_family("cosh"), LossFamily::Cosh);
  EXPECT_EQ(to_string(LossFamily::Sinh), "sinh");
  EXPECT_THROW(parse_loss_family("tanh"), ContractViolation);
}

TEST(Loss, HandExamples) {
  Rng rng(1);
  const auto A = hyperreg::testing::random_sparse(4, 2, 0.8, rng);
  const ProblemInstance exp_fit(A, DenseVector::constant(4, 1.0), DenseVector::zeros(4), LossFamily::Exp, 1.0);
  EXPECT_EQ(eval_loss(exp_fit, DenseVector::zeros(2)), 0.0);
  EXPECT_DOUBLE_EQ(eval_loss(one_by_one(LossFamily::Exp, 0, 1), DenseVector{0}), 0.5);
  const ProblemInstance sinh_zero(A, DenseVector::zeros(4), DenseVector::zeros(4), LossFamily::Sinh, 1.0);
  EXPECT_EQ(eval_loss(sinh_zero, DenseVector::zeros(2)), 0.0);
}

TEST(Loss, MatchesScalarReference) {
  Rng rng(2);
  for (auto family : kFamilies) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto inst = random_instance(family, rng, 6, 2);
      const auto x = hyperreg::testing::random_x_with_bound(inst.A(), rng, 2.0);
      const double ref = hyperreg::testing::reference_loss(inst, x);
      EXPECT_NEAR(eval_loss(inst, x), ref, 1e-12 * std::max(1.0, ref)) << to_string(family);
    }
  }
}

TEST(Loss, SinhParity) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto A = hyperreg::testing::random_sparse(8, 3, 0.6, rng);
    const auto b = hyperreg::testing::random_vector(8, rng, -2, 2);
    std::vector<double> neg_b(b.values());
    for (auto& v : neg_b) v = -v;
    const ProblemInstance pos(A, b, DenseVector::zeros(8), LossFamily::Sinh, 1.0);
    const ProblemInstance neg(A, DenseVector(neg_b), DenseVector::zeros(8), LossFamily::Sinh, 1.0);
    const auto x = hyperreg::testing::random_x_with_bound(A, rng, 2.5);
    std::vector<double> neg_x(x.values());
    for (auto& v : neg_x) v = -v;
    const double l1 = eval_loss(pos, x);
    EXPECT_NEAR(eval_loss(neg, DenseVector(neg_x)), l1, 1e-12 * std::max(1.0, l1));
  }
}

TEST(Loss, HyperbolicIdentityOfKernels) {
  // cosh and sinh are the exp-based definitions; f'(u) of cosh is sinh and
  // vice versa, so the slope/value pair must satisfy cosh^2 - sinh^2 = 1.
  Rng rng(4);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double u = rng.uniform(-3, 3);
    const auto inst = one_by_one(LossFamily::Cosh, 0, 0);
    // D = 2 cosh^2 - 1 for b = w = 0; gradient = sinh * cosh.
    const double D = hessian_factor(inst, DenseVector{u}).d[0];
    const double g = gradient(inst, DenseVector{u})[0];
    const double c2 = 0.5 * (D + 1.0);
    const double s2 = g * g / c2;
    worst = std::max(worst, std::abs(c2 - s2 - 1.0));
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Loss, OverflowOutsideRadius) {
  EXPECT_THROW(eval_loss(one_by_one(LossFamily::Exp, 0, 1), DenseVector{800}), Overflow);
  EXPECT_THROW(gradient(one_by_one(LossFamily::Cosh, 0, 1), DenseVector{-800}), Overflow);
  EXPECT_THROW(hessian_factor(one_by_one(LossFamily::Sinh, 0, 1), DenseVector{-800}), Overflow);
  // exp(2u) overflows before exp(u) does.
  EXPECT_THROW(eval_loss(one_by_one(LossFamily::Exp, 0, 1), DenseVector{400}), Overflow);
}

TEST(Gradient, HandExamples) {
  Rng rng(5);
  const auto A = hyperreg::testing::random_sparse(5, 3, 0.8, rng);
  const ProblemInstance stationary(A, DenseVector::constant(5, 1.0), DenseVector::zeros(5), LossFamily::Exp, 1.0);
  EXPECT_EQ(gradient(stationary, DenseVector::zeros(3)), DenseVector::zeros(3));
  EXPECT_EQ(gradient(one_by_one(LossFamily::Exp, 0, 0), DenseVector{0}), DenseVector{1.0});
}

TEST(Gradient, MatchesFiniteDifferences) {
  Rng rng(6);
  for (auto family : kFamilies) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto inst = random_instance(family, rng, 12, 4);
      const auto x = hyperreg::testing::random_x_with_bound(inst.A(), rng, rng.uniform(0.5, 3.0));
      EXPECT_LE(relative_error(gradient(inst, x).span(), fd_gradient(inst, x, 1e-5).span()), 1e-6)
          << to_string(family);
    }
  }
}

TEST(HessianFactor, HandExamples) {
  Rng rng(7);
  const auto A = hyperreg::testing::random_sparse(3, 2, 0.8, rng);
  const auto z = DenseVector::zeros(3);
  const auto x = DenseVector::zeros(2);
  EXPECT_EQ(hessian_factor(ProblemInstance(A, z, z, LossFamily::Exp, 1.0), x).d, DenseVector::constant(3, 2.0));
  EXPECT_EQ(hessian_factor(ProblemInstance(A, z, z, LossFamily::Cosh, 1.0), x).d, DenseVector::constant(3, 1.0));
  EXPECT_EQ(hessian_factor(ProblemInstance(A, z, z, LossFamily::Sinh, 1.0), x).d, DenseVector::constant(3, 1.0));
}

TEST(HessianFactor, GramMatchesFiniteDifferenceHessian) {
  Rng rng(8);
  for (auto family : kFamilies) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto inst = random_instance(family, rng, 10, 3);
      const auto x = hyperreg::testing::random_x_with_bound(inst.A(), rng, rng.uniform(0.5, 3.0));
      const double err = hyperreg::testing::rel_fro(dense(hessian(inst, x)), dense(fd_hessian(inst, x, 1e-4)));
      EXPECT_LE(err, 1e-5) << to_string(family);
    }
  }
}

TEST(WeightCondition, ExpHandExamples) {
  // sigma_min = 1, threshold 0.5 * 1 + 0.1 = 0.6.
  EXPECT_TRUE(check_weight_condition(one_by_one(LossFamily::Exp, 1.0, 1.0, 0.1)).holds);
  const auto fail = check_weight_condition(one_by_one(LossFamily::Exp, 1.0, 0.7, 0.1));
  EXPECT_FALSE(fail.holds);
  EXPECT_EQ(fail.failing_indices, std::vector<std::size_t>{0});
  EXPECT_NEAR(fail.min_margin, 0.49 - 0.6, 1e-15);
}

TEST(WeightCondition, FamilyConstants) {
  // b = 0, l = 1, sigma = 1: thresholds 1, 2, 0 for exp, cosh, sinh.
  EXPECT_FALSE(check_weight_condition(one_by_one(LossFamily::Exp, 0, 1.0)).holds);  // strict
  EXPECT_TRUE(check_weight_condition(one_by_one(LossFamily::Exp, 0, 1.001)).holds);
  EXPECT_FALSE(check_weight_condition(one_by_one(LossFamily::Cosh, 0, 1.4)).holds);
  EXPECT_TRUE(check_weight_condition(one_by_one(LossFamily::Cosh, 0, 1.42)).holds);
  EXPECT_FALSE(check_weight_condition(one_by_one(LossFamily::Sinh, 0, 0.0)).holds);
  EXPECT_TRUE(check_weight_condition(one_by_one(LossFamily::Sinh, 0, 0.01)).holds);
}

TEST(WeightCondition, UsesSigmaMinOfA) {
  // A = 2 * I: sigma_min = 2, threshold l/4.
  const ProblemInstance inst(SparseMatrix::from_triplets(1, 1, {{0, 0, 2.0}}), DenseVector{0}, DenseVector{0.6},
                             LossFamily::Exp, 1.0);
  const auto rep = check_weight_condition(inst);
  EXPECT_DOUBLE_EQ(rep.sigma_min, 2.0);
  EXPECT_TRUE(rep.holds);
}

TEST(WeightCondition, RankDeficientMatrix) {
  const double v[] = {1, 1, 1, 1};
  const ProblemInstance inst(SparseMatrix::from_dense(2, 2, v), DenseVector{0, 0}, DenseVector{5, 5}, LossFamily::Exp,
                             1.0);
  EXPECT_THROW(check_weight_condition(inst), RankDeficient);
}

// Whenever the certificate passes, H(x) >= l I at random points.
TEST(WeightCondition, CertificateImpliesConvexity) {
  Rng rng(9);
  for (auto family : kFamilies) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto inst = hyperreg::testing::certified_instance(family, rng, 15, 3, rng.uniform(0.1, 2.0), 0.01);
      ASSERT_TRUE(check_weight_condition(inst).holds);
      for (int p = 0; p < 10; ++p) {
        const auto x = hyperreg::testing::random_x_with_bound(inst.A(), rng, rng.uniform(0.0, 3.0));
        EXPECT_GE(min_eigenvalue(hessian(inst, x)), inst.l() - 1e-8) << to_string(family);
      }
    }
  }
}

TEST(Lipschitz, FormulaAndPrecondition) {
  EXPECT_DOUBLE_EQ(lipschitz_bound(3.0), std::exp(54.0));
  EXPECT_NEAR(lipschitz_bound(2.0 + 1e-9), std::exp(24.0), 1e-6 * std::exp(24.0));
  EXPECT_THROW(lipschitz_bound(2.0), PreconditionViolated);
  EXPECT_THROW(lipschitz_bound(1.0), PreconditionViolated);
  EXPECT_TRUE(std::isinf(lipschitz_bound(20.0)));
  EXPECT_DOUBLE_EQ(log_lipschitz_bound(20.0), 2400.0);
  EXPECT_THROW(RadiusBundle::from_radius(2.0), PreconditionViolated);
}

TEST(Lipschitz, EmpiricalRatioBelowBound) {
  Rng rng(10);
  for (auto family : kFamilies) {
    for (int trial = 0; trial < 50; ++trial) {
      // ||A|| <= R and ||x||, ||y|| <= R with R just above 2.
      const auto A = hyperreg::testing::with_spectral_norm(hyperreg::testing::random_sparse(12, 3, 0.6, rng), 1.5);
      const ProblemInstance inst(A, hyperreg::testing::random_vector(12, rng, -0.5, 0.5),
                                 hyperreg::testing::random_vector(12, rng, 0, 1), family, 1.0);
      const double R = 2.0 + 1e-6;
      auto x = hyperreg::testing::random_vector(3, rng, -1, 1);
      const Eigen::VectorXd dir = dense(hyperreg::testing::random_vector(3, rng, -1, 1));
      const Eigen::VectorXd step = dir * (0.005 / (dense(A) * dir).cwiseAbs().maxCoeff());
      const auto y = hyperreg::testing::from_eigen(dense(x) + step);
      ASSERT_LE(dense(y).norm(), R);
      const double ratio = spectral_norm(subtract(hessian(inst, x), hessian(inst, y))) / step.norm();
      EXPECT_LE(ratio, lipschitz_bound(R));
    }
  }
}
