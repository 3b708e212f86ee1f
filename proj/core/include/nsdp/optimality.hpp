#pragma once

// First- and second-order optimality quantities for the NSDP Lagrangian
//
//   L(x, y, Z) = f(x) − <g(x), y> − <G(x), Z>,
//
// and the residual certificates built from them (stationarity, Jordan
// complementarity, curvature on the perturbed critical subspace).

#include "nsdp/matfun.hpp"
#include "nsdp/model.hpp"

namespace nsdp {

struct MultiplierPair {
  Vec y;        ///< m-vector
  SymMatrix Z;  ///< d×d, PSD
};

struct OptimalityResiduals {
  double stationarity = 0.0;     ///< ||∇_x L(x, y, Z)||
  double feasibility_u = 0.0;    ///< max(||g||, ||[−G]₊||_F)
  double complementarity = 0.0;  ///< ||G(x) ∘ Z||_F
  double second_order = 0.0;     ///< max(0, −λ_min(Bᵀ(∇²L + σ)B))
  double epsilon = 0.0;          ///< certified bound for second_order
  Index subspace_dim = 0;
};

/// ∇f(x) − ∇g(x) y − DG(x)* Z.
Vec lagrangian_grad(const NsdpProblem& prob, const Vec& x, const Vec& y,
                    const SymMatrix& z);

/// ∇²f(x) − Σ_j y_j ∇²g_j(x) − [<G_ij(x), Z>]_ij.
Mat lagrangian_hess(const NsdpProblem& prob, const Vec& x, const Vec& y,
                    const SymMatrix& z);

/// y = −γ g(x), Z = γ [−G(x)]₊³. Throws InvalidInput unless gamma > 0.
MultiplierPair recover_multipliers(const NsdpProblem& prob, const Vec& x,
                                   double gamma);

struct JordanResult {
  SymMatrix product;
  double norm = 0.0;
};

JordanResult jordan_complementarity(const NsdpProblem& prob, const Vec& x,
                                    const SymMatrix& z);

/// σ(x, Z) = [2 <Z, G_i(x) G(x)† G_j(x)>]_ij with a spectral pseudo-inverse
/// thresholded at the classification tolerance.
Mat sigma_term(const NsdpProblem& prob, const Vec& x, const SymMatrix& z);

/// max(||g(x)||, ||[−G(x)]₊||_F).
double infeasibility_u(const NsdpProblem& prob, const Vec& x);

/// Orthonormal basis (n×s) of
///   S = { h : ∇g(x)ᵀh = 0, Uᵀ(DG(x)h)U = O },
/// where U holds eigenvectors of the b_count smallest eigenvalues of G(x).
/// Rank is decided by singular values above 1e-10 times the largest.
Mat critical_subspace_basis(const NsdpProblem& prob, const Vec& x,
                            Index b_count);

/// max(0, −λ_min(Bᵀ(∇²_xx L + σ(x, Z))B)); 0 when the basis has no columns.
double second_order_residual(const NsdpProblem& prob, const Vec& x,
                             const Vec& y, const SymMatrix& z, const Mat& basis);

/// hᵀσ(x, Z)h − γ <DG(x)h, DQ(−G(x)) DG(x)h> with Z = γ[−G(x)]₊³. This is
/// nonnegative for h in the perturbed critical subspace once the positive
/// eigenvalues of G are separated from the b_count trailing ones.
double curvature_gap(const NsdpProblem& prob, const Vec& x, double gamma,
                     const Vec& h);

/// Number of eigenvalues of G(x) treated as zero at an approximate limit
/// point: those <= max(default tol, sqrt(u(x)) · (1 + ||G(x)||_F)).
Index estimate_b_count(const NsdpProblem& prob, const Vec& x);

/// Whether the leading d − b_count eigenvalues of G(x) are all positive, i.e.
/// the iterate is past the point where the trailing eigenspace is separated.
bool leading_block_positive(const NsdpProblem& prob, const Vec& x,
                            Index b_count);

/// All residuals at x with multipliers recovered from gamma.
OptimalityResiduals evaluate_residuals(const NsdpProblem& prob, const Vec& x,
                                       double gamma, Index b_count,
                                       double epsilon);

}  // namespace nsdp
