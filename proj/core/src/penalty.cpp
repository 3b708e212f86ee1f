#include "nsdp/penalty.hpp"

#include <vector>

#include "nsdp/error.hpp"

namespace nsdp {

void PenaltyParams::validate(Index m, Index d) const {
  if (!(rho >= 0.0)) throw_invalid("PenaltyParams: rho must be >= 0");
  if (!(sigma > 0.0)) throw_invalid("PenaltyParams: sigma must be > 0");
  if (!(tau > 0.0)) throw_invalid("PenaltyParams: tau must be > 0");
  if (v.size() != m) throw_invalid("PenaltyParams: v must have size m");
  if (M.dim() != d) throw_invalid("PenaltyParams: M must be d×d");
}

PenaltyParams special_params(PenaltyKind kind, std::optional<double> gamma,
                             Index m, Index d) {
  PenaltyParams p{Vec::Zero(m), SymMatrix(d), 1.0, 1.0, 1.0};
  switch (kind) {
    case PenaltyKind::ScriptF:
      if (!gamma || !(*gamma > 0.0)) {
        throw_invalid("special_params: script_F requires gamma > 0");
      }
      p.rho = 1.0;
      p.sigma = *gamma;
      break;
    case PenaltyKind::ScriptP:
      if (gamma) throw_invalid("special_params: script_P takes no gamma");
      p.rho = 0.0;
      p.sigma = 1.0;
      break;
  }
  return p;
}

PenaltyEvaluation penalty_evaluate(const NsdpProblem& prob, const Vec& x,
                                   const PenaltyParams& p, PenaltyOrder order) {
  p.validate(prob.m(), prob.d());
  const Index n = prob.n();
  const Index m = prob.m();
  const double st = p.sigma * p.tau;
  const bool use_f = p.rho != 0.0;

  const Vec residual = p.v / p.tau - prob.eval_g(x);  // v/τ − g(x)
  const SymMatrix shifted = (1.0 / p.tau) * p.M - prob.eval_G(x);
  const EigenDecomp dec = eig_sym(shifted);

  PenaltyEvaluation out;
  out.value = 0.5 * st * residual.squaredNorm() + 0.25 * st * quartic_trace(dec);
  if (use_f) out.value += p.rho * prob.eval_f(x);
  if (order == PenaltyOrder::Value) return out;

  const SymMatrix cube = q_cube(dec);
  const Mat jac = prob.jac_g(x);
  const std::vector<SymMatrix> partials = prob.dG_partials(x);

  out.grad = Vec::Zero(n);
  if (use_f) out.grad += p.rho * prob.grad_f(x);
  if (m > 0) out.grad -= st * (jac * residual);
  for (Index i = 0; i < n; ++i) {
    out.grad[i] -= st * inner(partials[static_cast<std::size_t>(i)], cube);
  }
  if (order == PenaltyOrder::Gradient) return out;

  Mat h = Mat::Zero(n, n);
  if (use_f) h += p.rho * prob.hess_f(x);
  for (Index j = 0; j < m; ++j) h -= st * residual[j] * prob.hess_g(x, j);
  if (m > 0) h += st * jac * jac.transpose();

  const DQOperator dq = dq_coeff(dec, classify_eigs(dec));
  std::vector<SymMatrix> dq_partials;
  dq_partials.reserve(partials.size());
  for (const SymMatrix& gi : partials) dq_partials.push_back(dq_apply(dq, gi));

  for (Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (Index j = 0; j < n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      h(i, j) += st * inner(partials[ui], dq_partials[uj]);
      // G_ij is symmetric in (i, j); evaluate it once per unordered pair.
      if (j >= i) {
        const double curv = st * inner(prob.d2G_partial(x, i, j), cube);
        h(i, j) -= curv;
        if (j != i) h(j, i) -= curv;
      }
    }
  }
  out.hess_asymmetry = (h - h.transpose()).norm();
  out.hess = 0.5 * (h + h.transpose());
  return out;
}

double penalty_value(const NsdpProblem& prob, const Vec& x,
                     const PenaltyParams& p) {
  return penalty_evaluate(prob, x, p, PenaltyOrder::Value).value;
}

Vec penalty_grad(const NsdpProblem& prob, const Vec& x, const PenaltyParams& p) {
  return penalty_evaluate(prob, x, p, PenaltyOrder::Gradient).grad;
}

Mat penalty_hess(const NsdpProblem& prob, const Vec& x, const PenaltyParams& p) {
  return penalty_evaluate(prob, x, p, PenaltyOrder::Hessian).hess;
}

}  // namespace nsdp
