#pragma once

// Problem abstraction for
//
//   minimize f(x)  subject to  g(x) = 0,  G(x) ⪰ O,
//
// with f: R^n -> R, g: R^n -> R^m and G: R^n -> S^d. Jacobians follow the
// column convention ∇g(x) = [∇g_1(x) ... ∇g_m(x)] ∈ R^{n×m}.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "nsdp/matfun.hpp"

namespace nsdp {

struct ProblemDims {
  Index n = 0;
  Index m = 0;
  Index d = 1;
};

/// User callbacks. Second-derivative hooks (hess_f, hess_g, d2G) may be left
/// empty when the problem is registered with SecondDerivatives::FiniteDifference.
/// With m == 0, g, jac_g and hess_g are ignored. Hooks must be reentrant.
struct ProblemHooks {
  std::function<double(const Vec&)> f;
  std::function<Vec(const Vec&)> grad_f;
  std::function<Mat(const Vec&)> hess_f;

  std::function<Vec(const Vec&)> g;
  std::function<Mat(const Vec&)> jac_g;
  std::function<Mat(const Vec&, Index)> hess_g;

  std::function<SymMatrix(const Vec&)> G;
  std::function<SymMatrix(const Vec&, Index)> dG;
  std::function<SymMatrix(const Vec&, Index, Index)> d2G;
};

enum class SecondDerivatives { Analytic, FiniteDifference };

class NsdpProblem {
 public:
  NsdpProblem(std::string name, ProblemDims dims, ProblemHooks hooks,
              Vec start_point,
              SecondDerivatives second = SecondDerivatives::Analytic);

  const std::string& name() const { return name_; }
  Index n() const { return dims_.n; }
  Index m() const { return dims_.m; }
  Index d() const { return dims_.d; }
  const Vec& start_point() const { return start_; }
  SecondDerivatives second_derivatives() const { return second_; }
  const ProblemHooks& hooks() const { return hooks_; }

  double eval_f(const Vec& x) const;
  Vec grad_f(const Vec& x) const;
  Mat hess_f(const Vec& x) const;

  Vec eval_g(const Vec& x) const;
  Mat jac_g(const Vec& x) const;  ///< n×m
  Mat hess_g(const Vec& x, Index j) const;

  SymMatrix eval_G(const Vec& x) const;
  SymMatrix dG_partial(const Vec& x, Index i) const;  ///< G_i(x)
  SymMatrix d2G_partial(const Vec& x, Index i, Index j) const;  ///< G_ij(x)
  std::vector<SymMatrix> dG_partials(const Vec& x) const;

  /// Step used when second derivatives are synthesized: 1e-5·(1+|x_i|).
  static double fd_step(double xi) { return 1e-5 * (1.0 + std::abs(xi)); }

 private:
  void check_point(const Vec& x) const;
  void check_index(Index i, Index bound, const char* what) const;

  std::string name_;
  ProblemDims dims_;
  ProblemHooks hooks_;
  Vec start_;
  SecondDerivatives second_;
};

/// DG(x)h = Σ_i h_i G_i(x).
SymMatrix dG_apply(const NsdpProblem& prob, const Vec& x, const Vec& h);

/// DG(x)*Z, component i equal to <G_i(x), Z>.
Vec dG_adjoint(const NsdpProblem& prob, const Vec& x, const SymMatrix& z);

/// ||a - b||_F / max(1, ||b||_F).
double relative_error(const Mat& a, const Mat& b);

struct HookAudit {
  std::string hook;   ///< e.g. "grad_f", "dG", "d2G"
  Index i = -1;       ///< first index (constraint / partial), -1 if unused
  Index j = -1;       ///< second index, -1 if unused
  double error = 0.0;
  double threshold = 0.0;
  bool finite = true;
  bool passed = true;
};

struct DerivativeAuditReport {
  std::vector<HookAudit> entries;
  double step = 0.0;
  bool passed = true;

  /// Entry with the largest error/threshold ratio (non-finite first).
  const HookAudit* worst() const;
};

struct AuditThresholds {
  double first_order = 1e-6;
  double second_order = 1e-4;
};

/// Central-difference audit of every hook against its lower-order neighbour.
/// Coordinate i uses step·(1+|x_i|). Hooks that throw or return non-finite
/// values are reported as failed entries; the audit itself does not throw
/// except on a wrong-sized x or step <= 0.
DerivativeAuditReport audit_derivatives(const NsdpProblem& prob, const Vec& x,
                                        double step = 1e-6,
                                        AuditThresholds thresholds = {});

}  // namespace nsdp
