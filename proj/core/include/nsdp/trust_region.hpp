#pragma once

// Trust-region Newton minimizer that terminates only at approximate
// second-order stationary points:
//
//   ||∇φ(x)|| <= δ   and   λ_min(∇²φ(x)) >= −δ.
//
// Steps come from the exact trust-region subproblem, so negative curvature is
// always exploited and strict saddles are escaped.

#include <functional>

#include "nsdp/matfun.hpp"

namespace nsdp {

struct TrConfig {
  double delta0_radius = 1.0;
  int max_iter = 10000;
  double eta1 = 0.1;   ///< accept when actual/predicted > eta1
  double eta2 = 0.75;  ///< expand when actual/predicted > eta2 on the boundary
  double shrink = 0.25;
  double grow = 2.0;
  double radius_min = 1e-14;
  double radius_max = 1e12;

  void validate() const;
};

enum class TrStatus { Converged, MaxIter, RadiusCollapse };

const char* to_string(TrStatus status);

struct TrResult {
  Vec x;
  double value = 0.0;
  double grad_norm = 0.0;
  double min_hess_eig = 0.0;
  int iterations = 0;
  TrStatus status = TrStatus::MaxIter;
};

/// Solution of  min gᵀp + ½pᵀBp  s.t. ||p|| <= radius, characterized by
/// (B + λI)p = −g, B + λI ⪰ 0, λ >= 0, λ(radius − ||p||) = 0.
struct TrSubproblemSolution {
  Vec step;
  double multiplier = 0.0;  ///< λ
  bool interior = false;
  bool hard_case = false;
};

/// Near-exact subproblem solve. The spectrum of B is computed once; the
/// multiplier is found by a safeguarded Newton/bisection iteration on the
/// secular equation 1/radius − 1/||p(λ)|| = 0. In the hard case the step is
/// completed along an eigenvector of λ_min(B).
/// Throws InvalidInput on non-finite data, radius <= 0, or size mismatch.
TrSubproblemSolution ms_subproblem(const Mat& b, const Vec& g, double radius);

struct SmoothObjective {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
};

/// Minimizes from x0 until the second-order certificate holds for `delta`.
/// Accepted iterates never increase the objective beyond rounding: a step is
/// accepted on ratio > eta1, or, when the predicted decrease is below the
/// rounding level of the objective, on a non-increase within that level.
TrResult tr_minimize(const SmoothObjective& objective, const Vec& x0,
                     double delta, const TrConfig& cfg = {});

}  // namespace nsdp
