#include "nsdp/optimality.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <vector>

#include "nsdp/error.hpp"

namespace nsdp {

namespace {

void check_multipliers(const NsdpProblem& prob, const Vec& y,
                       const SymMatrix& z) {
  if (y.size() != prob.m()) throw_invalid("multiplier y must have size m");
  if (z.dim() != prob.d()) throw_invalid("multiplier Z must be d×d");
}

double min_eigenvalue(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

}  // namespace

Vec lagrangian_grad(const NsdpProblem& prob, const Vec& x, const Vec& y,
                    const SymMatrix& z) {
  check_multipliers(prob, y, z);
  Vec out = prob.grad_f(x);
  if (prob.m() > 0) out -= prob.jac_g(x) * y;
  out -= dG_adjoint(prob, x, z);
  return out;
}

Mat lagrangian_hess(const NsdpProblem& prob, const Vec& x, const Vec& y,
                    const SymMatrix& z) {
  check_multipliers(prob, y, z);
  const Index n = prob.n();
  Mat out = prob.hess_f(x);
  for (Index j = 0; j < prob.m(); ++j) out -= y[j] * prob.hess_g(x, j);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      const double c = inner(prob.d2G_partial(x, i, j), z);
      out(i, j) -= c;
      if (j != i) out(j, i) -= c;
    }
  }
  return 0.5 * (out + out.transpose());
}

MultiplierPair recover_multipliers(const NsdpProblem& prob, const Vec& x,
                                   double gamma) {
  if (!(gamma > 0.0)) throw_invalid("recover_multipliers: gamma must be > 0");
  MultiplierPair out{-gamma * prob.eval_g(x), SymMatrix(prob.d())};
  out.Z = gamma * q_cube(-prob.eval_G(x));
  return out;
}

JordanResult jordan_complementarity(const NsdpProblem& prob, const Vec& x,
                                    const SymMatrix& z) {
  JordanResult out{jordan_product(prob.eval_G(x), z), 0.0};
  out.norm = out.product.norm();
  return out;
}

Mat sigma_term(const NsdpProblem& prob, const Vec& x, const SymMatrix& z) {
  if (z.dim() != prob.d()) throw_invalid("sigma_term: Z must be d×d");
  const Index n = prob.n();
  const SymMatrix pinv = pinv_spectral(eig_sym(prob.eval_G(x)));
  const std::vector<SymMatrix> partials = prob.dG_partials(x);

  // 2 tr(Z G_i G† G_j) = 2 sum((Z G_i)ᵀ ∘ (G† G_j)).
  std::vector<Mat> left, right;
  left.reserve(partials.size());
  right.reserve(partials.size());
  for (const SymMatrix& gi : partials) {
    left.push_back((z.matrix() * gi.matrix()).transpose());
    right.push_back(pinv.matrix() * gi.matrix());
  }
  Mat out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      out(i, j) = 2.0 * left[static_cast<std::size_t>(i)]
                            .cwiseProduct(right[static_cast<std::size_t>(j)])
                            .sum();
    }
  }
  return 0.5 * (out + out.transpose());
}

double infeasibility_u(const NsdpProblem& prob, const Vec& x) {
  const double eq = prob.m() > 0 ? prob.eval_g(x).norm() : 0.0;
  const double psd = proj_psd(-prob.eval_G(x)).norm();
  return std::max(eq, psd);
}

Mat critical_subspace_basis(const NsdpProblem& prob, const Vec& x,
                            Index b_count) {
  const Index n = prob.n();
  const Index d = prob.d();
  if (b_count < 0 || b_count > d) {
    throw_invalid("critical_subspace_basis: b_count must lie in [0, d]");
  }
  const EigenDecomp dec = eig_sym(prob.eval_G(x));
  // Trailing columns of the descending decomposition = smallest eigenvalues.
  const Mat u = dec.vectors.rightCols(b_count);

  const Index block_rows = b_count * (b_count + 1) / 2;
  Mat rows(prob.m() + block_rows, n);
  if (prob.m() > 0) rows.topRows(prob.m()) = prob.jac_g(x).transpose();
  if (block_rows > 0) {
    for (Index i = 0; i < n; ++i) {
      const Mat compressed = u.transpose() * prob.dG_partial(x, i).matrix() * u;
      Index r = prob.m();
      for (Index p = 0; p < b_count; ++p) {
        for (Index q = p; q < b_count; ++q) rows(r++, i) = compressed(p, q);
      }
    }
  }
  if (rows.rows() == 0) return Mat::Identity(n, n);

  Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? 1e-10 * sv[0] : 0.0;
  Index rank = 0;
  for (Index k = 0; k < sv.size(); ++k) {
    if (sv[k] > cutoff && sv[k] > 0.0) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

double second_order_residual(const NsdpProblem& prob, const Vec& x,
                             const Vec& y, const SymMatrix& z,
                             const Mat& basis) {
  if (basis.cols() == 0) return 0.0;
  if (basis.rows() != prob.n()) {
    throw_invalid("second_order_residual: basis must have n rows");
  }
  const Mat curvature = lagrangian_hess(prob, x, y, z) + sigma_term(prob, x, z);
  Mat reduced = basis.transpose() * curvature * basis;
  reduced = 0.5 * (reduced + reduced.transpose());
  return std::max(0.0, -min_eigenvalue(reduced));
}

double curvature_gap(const NsdpProblem& prob, const Vec& x, double gamma,
                     const Vec& h) {
  const MultiplierPair mult = recover_multipliers(prob, x, gamma);
  const double sigma_part = h.dot(sigma_term(prob, x, mult.Z) * h);
  const SymMatrix dgh = dG_apply(prob, x, h);
  const SymMatrix dq_dgh = dq_apply(dq_at(-prob.eval_G(x)), dgh);
  return sigma_part - gamma * inner(dgh, dq_dgh);
}

Index estimate_b_count(const NsdpProblem& prob, const Vec& x) {
  const EigenDecomp dec = eig_sym(prob.eval_G(x));
  const double u = infeasibility_u(prob, x);
  const double cutoff = std::max(default_eig_tolerance(dec),
                                 std::sqrt(u) * (1.0 + dec.source_norm));
  Index count = 0;
  for (Index j = 0; j < dec.dim(); ++j) {
    if (dec.values[j] <= cutoff) ++count;
  }
  return count;
}

bool leading_block_positive(const NsdpProblem& prob, const Vec& x,
                            Index b_count) {
  const EigenDecomp dec = eig_sym(prob.eval_G(x));
  const Index leading = dec.dim() - b_count;
  if (leading <= 0) return true;
  return dec.values[leading - 1] > default_eig_tolerance(dec);
}

OptimalityResiduals evaluate_residuals(const NsdpProblem& prob, const Vec& x,
                                       double gamma, Index b_count,
                                       double epsilon) {
  const MultiplierPair mult = recover_multipliers(prob, x, gamma);
  OptimalityResiduals out;
  out.stationarity = lagrangian_grad(prob, x, mult.y, mult.Z).norm();
  out.feasibility_u = infeasibility_u(prob, x);
  out.complementarity = jordan_complementarity(prob, x, mult.Z).norm;
  const Mat basis = critical_subspace_basis(prob, x, b_count);
  out.subspace_dim = basis.cols();
  out.second_order = second_order_residual(prob, x, mult.y, mult.Z, basis);
  out.epsilon = epsilon;
  return out;
}

}  // namespace nsdp
