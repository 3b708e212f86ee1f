#include <gtest/gtest.h>

#include <cmath>

#include "nsdp/error.hpp"
#include "nsdp/optimality.hpp"
#include "nsdp/problems.hpp"
#include "test_support.hpp"

namespace nsdp {
namespace {

using testing::Rng;

Mat dmat(const Vec& v) { return v.asDiagonal(); }

// L(x, y, Z) = f(x) − yᵀg(x) − <Z, G(x)>, evaluated from the raw hooks.
double lagrangian_value(const NsdpProblem& p, const Vec& x, const Vec& y,
                        const SymMatrix& z) {
  double v = p.hooks().f(x) - (z.matrix().array() * p.hooks().G(x).matrix().array()).sum();
  if (p.m() > 0) v -= y.dot(p.hooks().g(x));
  return v;
}

// n = 2, g(x) = x, G ≡ I (d = 2).
NsdpProblem equality_only() {
  ProblemHooks h;
  h.f = [](const Vec& x) { return x.squaredNorm(); };
  h.grad_f = [](const Vec& x) { return Vec(2.0 * x); };
  h.hess_f = [](const Vec&) { return Mat(2.0 * Mat::Identity(2, 2)); };
  h.g = [](const Vec& x) { return x; };
  h.jac_g = [](const Vec&) { return Mat(Mat::Identity(2, 2)); };
  h.hess_g = [](const Vec&, Index) { return Mat(Mat::Zero(2, 2)); };
  h.G = [](const Vec&) { return SymMatrix::identity(2); };
  h.dG = [](const Vec&, Index) { return SymMatrix(2); };
  h.d2G = [](const Vec&, Index, Index) { return SymMatrix(2); };
  return NsdpProblem("eq", {2, 2, 2}, std::move(h), Vec::Zero(2));
}

// n = 2, f = ½(x0² − 2 x1²), G ≡ [1]. Hessian of L is diag(1, −2).
NsdpProblem saddle_objective() {
  ProblemHooks h;
  h.f = [](const Vec& x) { return 0.5 * (x[0] * x[0] - 2.0 * x[1] * x[1]); };
  h.grad_f = [](const Vec& x) { return Vec{{x[0], -2.0 * x[1]}}; };
  h.hess_f = [](const Vec&) { return Mat(Vec{{1.0, -2.0}}.asDiagonal()); };
  h.G = [](const Vec&) { return SymMatrix::identity(1); };
  h.dG = [](const Vec&, Index) { return SymMatrix(1); };
  h.d2G = [](const Vec&, Index, Index) { return SymMatrix(1); };
  return NsdpProblem("saddle", {2, 0, 1}, std::move(h), Vec::Zero(2));
}

// Root of 2(1 + x) = γ(−x)³ on (−1, 0) by bisection.
double scalar_bound_root(double gamma) {
  double lo = -1.0, hi = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double r = 2.0 * (1.0 + mid) - gamma * std::pow(-mid, 3);
    (r > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(Lagrangian, ZeroMultipliersGiveObjectiveDerivatives) {
  const NsdpProblem p = testing::nonlinear_test_problem();
  const Vec x{{0.3, -0.7}};
  EXPECT_EQ(lagrangian_grad(p, x, Vec::Zero(1), SymMatrix(2)), p.grad_f(x));
  EXPECT_EQ(lagrangian_hess(p, x, Vec::Zero(1), SymMatrix(2)), p.hess_f(x));
}

TEST(Lagrangian, ScalarBoundKktPoint) {
  const CorpusEntry& e = get_problem("scalar-bound");
  const Vec g = lagrangian_grad(e.problem, Vec::Zero(1), Vec(0), e.known_multipliers->Z);
  EXPECT_EQ(g[0], 0.0);
}

TEST(Lagrangian, MatchesCentralDifferences) {
  Rng rng(101);
  std::vector<NsdpProblem> probs{testing::nonlinear_test_problem()};
  for (const std::string& name : list_problems()) probs.push_back(get_problem(name).problem);
  for (const NsdpProblem& p : probs) {
    for (int t = 0; t < 20; ++t) {
      const Vec x = testing::gaussian_vec(rng, p.n());
      const Vec y = testing::gaussian_vec(rng, p.m());
      const SymMatrix z = testing::random_sym(rng, p.d());
      const Vec fd = testing::fd_gradient(
          [&](const Vec& w) { return lagrangian_value(p, w, y, z); }, x);
      EXPECT_LE(testing::rel_err(lagrangian_grad(p, x, y, z), fd), 1e-6) << p.name();
      const Mat hfd = testing::fd_jacobian(
          [&](const Vec& w) { return lagrangian_grad(p, w, y, z); }, x);
      const Mat h = lagrangian_hess(p, x, y, z);
      EXPECT_LE(testing::rel_err(h, hfd), 1e-6) << p.name();
      EXPECT_EQ(h, h.transpose());
    }
  }
}

TEST(RecoverMultipliers, Examples) {
  const NsdpProblem& np = get_problem("nearest-psd").problem;
  // G(1, 0, −1) = diag(1, −1).
  const MultiplierPair mp = recover_multipliers(np, Vec{{1.0, 0.0, -1.0}}, 3.0);
  EXPECT_LE((mp.Z.matrix() - dmat(Vec{{0.0, 3.0}})).norm(), 1e-14);
  EXPECT_EQ(mp.y.size(), 0);

  const CorpusEntry& cm = get_problem("corr-matrix");
  const MultiplierPair feas = recover_multipliers(cm.problem, *cm.known_solution, 10.0);
  EXPECT_EQ(feas.y, Vec::Zero(2));
  EXPECT_LE(feas.Z.norm(), 1e-30);

  EXPECT_THROW(recover_multipliers(np, Vec::Zero(3), 0.0), Error);
}

TEST(RecoverMultipliers, ScalarBoundStationarityOracle) {
  const NsdpProblem& sb = get_problem("scalar-bound").problem;
  for (double gamma : {1.0, 1e2, 1e4, 1e8, 1e12}) {
    const double x = scalar_bound_root(gamma);
    const MultiplierPair mp = recover_multipliers(sb, Vec::Constant(1, x), gamma);
    EXPECT_NEAR(mp.Z(0, 0), 2.0 * (1.0 + x), 1e-9 * 2.0) << gamma;
  }
}

TEST(RecoverMultipliers, ZIsPsdCommutesAndVanishesOnPositiveEigenspace) {
  Rng rng(103);
  std::vector<NsdpProblem> probs{testing::nonlinear_test_problem()};
  for (const std::string& name : list_problems()) probs.push_back(get_problem(name).problem);
  for (const NsdpProblem& p : probs) {
    for (int t = 0; t < 20; ++t) {
      const Vec x = testing::gaussian_vec(rng, p.n());
      const double gamma = std::pow(10.0, testing::uniform(rng, 0.0, 6.0));
      const MultiplierPair mp = recover_multipliers(p, x, gamma);
      const Mat z = mp.Z.matrix();
      const Mat g = p.eval_G(x).matrix();
      const double scale = 1.0 + z.norm() * (1.0 + g.norm());
      Eigen::SelfAdjointEigenSolver<Mat> ez(z);
      EXPECT_GE(ez.eigenvalues().minCoeff(), -1e-10 * (1.0 + z.norm()));
      EXPECT_LE((z * g - g * z).norm(), 1e-9 * scale);
      const EigenDecomp dec = eig_sym(SymMatrix(g));
      const EigClassification cls = classify_eigs(dec);
      for (Index j : cls.pos) {
        EXPECT_LE((z * dec.vectors.col(j)).norm(), 1e-12 * (1.0 + z.norm())) << p.name();
      }
    }
  }
}

TEST(JordanComplementarity, Examples) {
  const NsdpProblem& np = get_problem("nearest-psd").problem;
  const Vec x{{1.0, 0.0, -1.0}};
  const JordanResult zero = jordan_complementarity(np, x, SymMatrix(2));
  EXPECT_EQ(zero.norm, 0.0);
  const JordanResult r = jordan_complementarity(np, x, SymMatrix(dmat(Vec{{0.0, 3.0}})));
  EXPECT_LE((r.product.matrix() - dmat(Vec{{0.0, -3.0}})).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(r.norm, 3.0);
}

TEST(JordanComplementarity, BoundedByPlainProduct) {
  Rng rng(107);
  const NsdpProblem& np = get_problem("nearest-psd").problem;
  for (int t = 0; t < 100; ++t) {
    const Vec x = testing::gaussian_vec(rng, 3);
    const Mat a = testing::gaussian_mat(rng, 2, 2);
    const SymMatrix z(a * a.transpose());
    const JordanResult r = jordan_complementarity(np, x, z);
    const Mat gz = np.eval_G(x).matrix() * z.matrix();
    EXPECT_LE(r.norm, gz.norm() * (1.0 + 1e-14));
    EXPECT_NEAR(r.norm, (0.5 * (gz + gz.transpose())).norm(), 1e-14 * (1.0 + gz.norm()));
  }
}

TEST(SigmaTerm, Examples) {
  const NsdpProblem& sb = get_problem("scalar-bound").problem;
  const Vec x = Vec::Constant(1, -0.25);
  EXPECT_EQ(sigma_term(sb, x, SymMatrix(1)).norm(), 0.0);
  const SymMatrix z(Mat::Constant(1, 1, 1.5));
  EXPECT_NEAR(sigma_term(sb, x, z)(0, 0), 2.0 * 1.5 / -0.25, 1e-14);
}

TEST(SigmaTerm, SymmetricAndHomogeneous) {
  Rng rng(109);
  const NsdpProblem p = testing::nonlinear_test_problem();
  for (int t = 0; t < 20; ++t) {
    const Vec x = testing::gaussian_vec(rng, 2);
    const Mat a = testing::gaussian_mat(rng, 2, 2);
    const SymMatrix z(a * a.transpose());
    const Mat s = sigma_term(p, x, z);
    EXPECT_LE((s - s.transpose()).norm(), 1e-12 * (1.0 + s.norm()));
    const double c = testing::uniform(rng, 0.1, 10.0);
    EXPECT_LE((sigma_term(p, x, c * z) - c * s).norm(), 1e-12 * (1.0 + c * s.norm()));
  }
}

TEST(InfeasibilityU, Examples) {
  const CorpusEntry& cm = get_problem("corr-matrix");
  EXPECT_EQ(infeasibility_u(cm.problem, *cm.known_solution), 0.0);
  EXPECT_DOUBLE_EQ(infeasibility_u(equality_only(), Vec{{3.0, -4.0}}), 5.0);
  const NsdpProblem& np = get_problem("nearest-psd").problem;
  EXPECT_NEAR(infeasibility_u(np, Vec{{1.0, 0.0, -2.0}}), 2.0, 1e-15);
}

TEST(CriticalSubspace, Examples) {
  const NsdpProblem& np = get_problem("nearest-psd").problem;
  const Mat full = critical_subspace_basis(np, Vec{{1.0, 0.0, 1.0}}, 0);
  EXPECT_EQ(full.cols(), 3);
  EXPECT_LE((full.transpose() * full - Mat::Identity(3, 3)).norm(), 1e-14);

  EXPECT_EQ(critical_subspace_basis(equality_only(), Vec::Zero(2), 0).cols(), 0);

  const NsdpProblem& sb = get_problem("scalar-bound").problem;
  EXPECT_EQ(critical_subspace_basis(sb, Vec::Constant(1, -1e-6), 1).cols(), 0);
}

TEST(CriticalSubspace, NearestPsdHasCodimensionOne) {
  const NsdpProblem& np = get_problem("nearest-psd").problem;
  const Vec x{{0.51, 0.49, 0.5}};
  const Mat b = critical_subspace_basis(np, x, 1);
  ASSERT_EQ(b.cols(), 2);
  // The constraint u2ᵀ(DG h)u2 = 0 with u2 the smallest eigenvector.
  const EigenDecomp dec = eig_sym(np.eval_G(x));
  const Vec u = dec.vectors.col(1);
  for (Index c = 0; c < 2; ++c) {
    const Mat dgh = dG_apply(np, x, b.col(c)).matrix();
    EXPECT_LE(std::abs(u.dot(dgh * u)), 1e-14);
  }
  EXPECT_LE((b.transpose() * b - Mat::Identity(2, 2)).norm(), 1e-14);
}

TEST(SecondOrderResidual, Examples) {
  const NsdpProblem p = saddle_objective();
  const Vec x = Vec::Zero(2);
  const Mat basis = critical_subspace_basis(p, x, 0);
  EXPECT_NEAR(second_order_residual(p, x, Vec(0), SymMatrix(1), basis), 2.0, 1e-14);
  const Mat only_first = Mat::Identity(2, 1);
  EXPECT_EQ(second_order_residual(p, x, Vec(0), SymMatrix(1), only_first), 0.0);
  EXPECT_EQ(second_order_residual(p, x, Vec(0), SymMatrix(1), Mat(2, 0)), 0.0);
}

TEST(SecondOrderResidual, InvariantUnderBasisRotation) {
  Rng rng(113);
  const NsdpProblem p = testing::nonlinear_test_problem();
  for (int t = 0; t < 20; ++t) {
    const Vec x = testing::gaussian_vec(rng, 2);
    const MultiplierPair mp = recover_multipliers(p, x, 10.0);
    const Mat basis = critical_subspace_basis(p, x, 0);
    const Mat rotated = basis * testing::random_orthogonal(rng, basis.cols());
    const double a = second_order_residual(p, x, mp.y, mp.Z, basis);
    const double b = second_order_residual(p, x, mp.y, mp.Z, rotated);
    EXPECT_NEAR(a, b, 1e-10 * (1.0 + a));
  }
}

TEST(EstimateBCount, CountsNearZeroEigenvalues) {
  const NsdpProblem& sb = get_problem("scalar-bound").problem;
  EXPECT_EQ(estimate_b_count(sb, Vec::Constant(1, 1.0)), 0);
  EXPECT_EQ(estimate_b_count(sb, Vec::Constant(1, -2.7e-5)), 1);
  EXPECT_EQ(estimate_b_count(sb, Vec::Constant(1, 0.0)), 1);
  const NsdpProblem& np = get_problem("nearest-psd").problem;
  EXPECT_EQ(estimate_b_count(np, Vec{{0.5, 0.5, 0.5}}), 1);
  EXPECT_TRUE(leading_block_positive(np, Vec{{0.5, 0.5, 0.5}}, 1));
  EXPECT_FALSE(leading_block_positive(np, Vec{{-1.0, 0.0, -1.0}}, 1));
}

TEST(EvaluateResiduals, CheckCommandExample) {
  const NsdpProblem& sb = get_problem("scalar-bound").problem;
  const OptimalityResiduals r = evaluate_residuals(sb, Vec::Zero(1), 100.0, 1, 0.0);
  EXPECT_EQ(r.complementarity, 0.0);
  EXPECT_EQ(r.stationarity, 2.0);
  EXPECT_EQ(r.feasibility_u, 0.0);
  EXPECT_EQ(r.subspace_dim, 0);
}

}  // namespace
}  // namespace nsdp
