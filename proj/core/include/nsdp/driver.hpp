#pragma once

// Outer penalty method. Each outer iteration k minimizes
//
//   ℱ(x; γ_k) = f(x) + γ_k/2 ||g(x)||² + γ_k/4 tr([−G(x)]₊⁴)
//
// from the warm start x̂_k to a second-order certificate with tolerance δ_k,
// then updates x̂ and γ. Multipliers y_k = −γ_{k−1} g(x_k) and
// Z_k = γ_{k−1}[−G(x_k)]₊³ are recorded for every iterate, together with the
// first- and second-order residuals they certify.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nsdp/model.hpp"
#include "nsdp/optimality.hpp"
#include "nsdp/trust_region.hpp"

namespace nsdp {

struct PenaltyConfig {
  double eta = 0.5;      ///< in (0, 1)
  double theta = 10.0;   ///< > 1
  double gamma0 = 1.0;   ///< > 0
  double delta0 = 0.1;   ///< in (0, 1)
  double beta = 0.5;     ///< δ_k = δ0 βᵏ, β in (0, 1)
  double tol_feas = 5e-5;
  double tol_opt = 1e-6;
  int max_outer = 60;
  double feas_check_tol = 1e-8;
  double gamma_cap = 1e14;
  /// Size of the zero block of G at the limit; estimated from the final
  /// iterate when absent.
  std::optional<Index> b_count;
  TrConfig inner;

  void validate() const;
};

enum class SolveStatus { FeasOptReached, MaxOuter, InnerFailure };

const char* to_string(SolveStatus status);

struct InnerStats {
  int iterations = 0;
  TrStatus status = TrStatus::Converged;
  double grad_norm = 0.0;
  double min_hess_eig = 0.0;
};

/// Record for iterate x_k (k >= 1), produced by the subproblem with weight
/// γ_{k−1} and tolerance δ_{k−1}.
struct IterateRecord {
  int k = 0;
  Vec x;
  double gamma = 0.0;       ///< γ_{k−1}
  double gamma_next = 0.0;  ///< γ_k
  double delta = 0.0;       ///< δ_{k−1}
  double u = 0.0;
  double f_value = 0.0;
  double penalty_value = 0.0;     ///< ℱ(x_k; γ_{k−1})
  double penalty_at_start = 0.0;  ///< ℱ(x̂_{k−1}; γ_{k−1})
  bool xhat_reset = false;        ///< x̂_k = x₀ was chosen
  MultiplierPair multipliers;
  OptimalityResiduals residuals;
  bool subspace_stable = false;   ///< leading d − b_count eigenvalues of G > 0
  InnerStats inner;
};

struct SolveReport {
  std::string problem;
  PenaltyConfig config;
  std::vector<IterateRecord> iterates;
  SolveStatus status = SolveStatus::MaxOuter;
  std::string message;
  double f_start = 0.0;  ///< f(x₀)
  Index b_count = 0;
};

using IterateSink = std::function<void(const IterateRecord&)>;

/// γ_{k+1} = γ_k if k == 0 or u_{k+1} <= η u_k, else θ γ_k.
double next_gamma(int k, double gamma, double u_prev, double u_next, double eta,
                  double theta);

/// True when x̂_{k+1} = x_{k+1}, i.e. ℱ(x_{k+1}; γ_k) <= f(x₀).
bool keep_iterate(double penalty_value, double f_start);

/// Runs the penalty method. Throws Error{StartNotFeasible} when
/// u(start) > feas_check_tol and InvalidInput on a bad config. Records are
/// passed to `sink` once the second-order certificates have been filled in.
SolveReport solve(const NsdpProblem& prob, const PenaltyConfig& cfg,
                  const IterateSink& sink = {});

}  // namespace nsdp
