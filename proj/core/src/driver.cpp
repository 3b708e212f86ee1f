#include "nsdp/driver.hpp"

#include <cmath>
#include <sstream>

#include "nsdp/error.hpp"
#include "nsdp/penalty.hpp"

namespace nsdp {

void PenaltyConfig::validate() const {
  if (!(eta > 0.0 && eta < 1.0)) throw_invalid("PenaltyConfig: eta must lie in (0, 1)");
  if (!(theta > 1.0)) throw_invalid("PenaltyConfig: theta must be > 1");
  if (!(gamma0 > 0.0)) throw_invalid("PenaltyConfig: gamma0 must be > 0");
  if (!(delta0 > 0.0 && delta0 < 1.0)) {
    throw_invalid("PenaltyConfig: delta0 must lie in (0, 1)");
  }
  if (!(beta > 0.0 && beta < 1.0)) throw_invalid("PenaltyConfig: beta must lie in (0, 1)");
  if (!(tol_feas >= 0.0)) throw_invalid("PenaltyConfig: tol_feas must be >= 0");
  if (!(tol_opt >= 0.0)) throw_invalid("PenaltyConfig: tol_opt must be >= 0");
  if (max_outer < 1) throw_invalid("PenaltyConfig: max_outer must be >= 1");
  if (!(feas_check_tol >= 0.0)) {
    throw_invalid("PenaltyConfig: feas_check_tol must be >= 0");
  }
  if (!(gamma_cap >= gamma0)) throw_invalid("PenaltyConfig: gamma_cap must be >= gamma0");
  if (b_count && *b_count < 0) throw_invalid("PenaltyConfig: b_count must be >= 0");
  inner.validate();
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::FeasOptReached:
      return "FeasOptReached";
    case SolveStatus::MaxOuter:
      return "MaxOuter";
    case SolveStatus::InnerFailure:
      return "InnerFailure";
  }
  return "Unknown";
}

double next_gamma(int k, double gamma, double u_prev, double u_next, double eta,
                  double theta) {
  if (k == 0 || u_next <= eta * u_prev) return gamma;
  return theta * gamma;
}

bool keep_iterate(double penalty_value, double f_start) {
  return penalty_value <= f_start;
}

namespace {

SmoothObjective script_f_objective(const NsdpProblem& prob, double gamma) {
  const PenaltyParams params =
      special_params(PenaltyKind::ScriptF, gamma, prob.m(), prob.d());
  SmoothObjective obj;
  obj.value = [&prob, params](const Vec& x) {
    return penalty_value(prob, x, params);
  };
  obj.gradient = [&prob, params](const Vec& x) {
    return penalty_grad(prob, x, params);
  };
  obj.hessian = [&prob, params](const Vec& x) {
    return penalty_hess(prob, x, params);
  };
  return obj;
}

}  // namespace

SolveReport solve(const NsdpProblem& prob, const PenaltyConfig& cfg,
                  const IterateSink& sink) {
  cfg.validate();
  if (cfg.b_count && *cfg.b_count > prob.d()) {
    throw_invalid("PenaltyConfig: b_count exceeds d");
  }
  const Vec& x0 = prob.start_point();
  const double u0 = infeasibility_u(prob, x0);
  if (!(u0 <= cfg.feas_check_tol)) {
    std::ostringstream msg;
    msg << "start point of '" << prob.name() << "' is infeasible (u = " << u0
        << ")";
    throw Error(ErrorCode::StartNotFeasible, msg.str());
  }

  SolveReport report;
  report.problem = prob.name();
  report.config = cfg;
  report.f_start = prob.eval_f(x0);

  Vec x_hat = x0;
  double gamma = cfg.gamma0;
  double delta = cfg.delta0;
  double u_prev = u0;
  bool done = false;

  for (int k = 0; !done; ++k) {
    const SmoothObjective obj = script_f_objective(prob, gamma);
    const TrResult inner = tr_minimize(obj, x_hat, delta, cfg.inner);

    IterateRecord rec;
    rec.k = k + 1;
    rec.x = inner.x;
    rec.gamma = gamma;
    rec.delta = delta;
    rec.u = infeasibility_u(prob, inner.x);
    rec.f_value = prob.eval_f(inner.x);
    rec.penalty_value = inner.value;
    rec.penalty_at_start = obj.value(x_hat);
    rec.multipliers = recover_multipliers(prob, inner.x, gamma);
    rec.inner = {inner.iterations, inner.status, inner.grad_norm,
                 inner.min_hess_eig};

    if (inner.status != TrStatus::Converged) {
      report.status = SolveStatus::InnerFailure;
      report.message = std::string("inner solve ") + to_string(inner.status) +
                       " at outer iteration " + std::to_string(k);
      rec.gamma_next = gamma;
      report.iterates.push_back(std::move(rec));
      break;
    }

    rec.xhat_reset = !keep_iterate(inner.value, report.f_start);
    x_hat = rec.xhat_reset ? x0 : inner.x;

    const double gamma_next =
        next_gamma(k, gamma, u_prev, rec.u, cfg.eta, cfg.theta);
    rec.gamma_next = gamma_next;

    if (rec.u <= cfg.tol_feas && delta <= cfg.tol_opt) {
      report.status = SolveStatus::FeasOptReached;
      done = true;
    } else if (k + 1 >= cfg.max_outer) {
      report.status = SolveStatus::MaxOuter;
      report.message = "max_outer reached";
      done = true;
    } else if (gamma_next > cfg.gamma_cap) {
      report.status = SolveStatus::InnerFailure;
      std::ostringstream msg;
      msg << "penalty parameter would exceed cap " << cfg.gamma_cap;
      report.message = msg.str();
      done = true;
    }

    u_prev = rec.u;
    gamma = gamma_next;
    delta *= cfg.beta;
    report.iterates.push_back(std::move(rec));
  }

  report.b_count = cfg.b_count.value_or(
      estimate_b_count(prob, report.iterates.back().x));
  for (IterateRecord& rec : report.iterates) {
    rec.residuals =
        evaluate_residuals(prob, rec.x, rec.gamma, report.b_count, rec.delta);
    rec.subspace_stable = leading_block_positive(prob, rec.x, report.b_count);
    if (sink) sink(rec);
  }
  return report;
}

}  // namespace nsdp
