#pragma once

// Twice continuously differentiable penalty
//
//   F(x; v, M, ρ, σ, τ) = ρ f(x) + (στ/2) ||v/τ − g(x)||²
//                          + (στ/4) tr([M/τ − G(x)]₊⁴)
//
// with exact gradient and Hessian. The quartic term is C² because its
// gradient involves Q(X) = [X]₊³, whose derivative DQ is continuous.

#include <optional>

#include "nsdp/matfun.hpp"
#include "nsdp/model.hpp"

namespace nsdp {

struct PenaltyParams {
  Vec v;            ///< m-vector
  SymMatrix M;      ///< d×d
  double rho = 1.0;    ///< >= 0 (0 gives the pure infeasibility measure)
  double sigma = 1.0;  ///< > 0
  double tau = 1.0;    ///< > 0

  /// Throws InvalidInput on sign or dimension violations.
  void validate(Index m, Index d) const;
};

enum class PenaltyKind {
  ScriptF,  ///< F(x; 0, O, 1, γ, 1) = f + γ/2 ||g||² + γ/4 tr([−G]₊⁴)
  ScriptP,  ///< F(x; 0, O, 0, 1, 1) = 1/2 ||g||² + 1/4 tr([−G]₊⁴)
};

/// Parameters of the two specializations used by the penalty method.
/// `gamma` is required (> 0) for ScriptF and must be absent for ScriptP.
PenaltyParams special_params(PenaltyKind kind, std::optional<double> gamma,
                             Index m, Index d);

struct PenaltyEvaluation {
  double value = 0.0;
  Vec grad;
  Mat hess;
  /// ||H − H^T||_F of the assembled Hessian before symmetrization.
  double hess_asymmetry = 0.0;
};

enum class PenaltyOrder { Value = 0, Gradient = 1, Hessian = 2 };

/// Value and, on request, gradient and Hessian. All spectral quantities share
/// one eigendecomposition of M/τ − G(x).
PenaltyEvaluation penalty_evaluate(const NsdpProblem& prob, const Vec& x,
                                   const PenaltyParams& p, PenaltyOrder order);

double penalty_value(const NsdpProblem& prob, const Vec& x,
                     const PenaltyParams& p);
Vec penalty_grad(const NsdpProblem& prob, const Vec& x, const PenaltyParams& p);
Mat penalty_hess(const NsdpProblem& prob, const Vec& x, const PenaltyParams& p);

}  // namespace nsdp
