#include "nsdp/problems.hpp"

#include <map>

#include "nsdp/error.hpp"

namespace nsdp {

namespace {

SymMatrix sym2(double a, double b, double c) {
  Mat m(2, 2);
  m << a, b, b, c;
  return SymMatrix(m);
}

SymMatrix scalar_matrix(double v) { return SymMatrix(Mat::Constant(1, 1, v)); }

// min (x+1)²  s.t.  [x] ⪰ 0.  Solution x = 0 with Z = [2].
CorpusEntry scalar_bound() {
  ProblemHooks h;
  h.f = [](const Vec& x) { return (x[0] + 1.0) * (x[0] + 1.0); };
  h.grad_f = [](const Vec& x) { return Vec::Constant(1, 2.0 * (x[0] + 1.0)); };
  h.hess_f = [](const Vec&) { return Mat::Constant(1, 1, 2.0); };
  h.G = [](const Vec& x) { return scalar_matrix(x[0]); };
  h.dG = [](const Vec&, Index) { return scalar_matrix(1.0); };
  h.d2G = [](const Vec&, Index, Index) { return scalar_matrix(0.0); };

  return CorpusEntry{
      NsdpProblem("scalar-bound", {1, 0, 1}, std::move(h), Vec::Constant(1, 1.0)),
      Vec::Zero(1),
      MultiplierPair{Vec(0), scalar_matrix(2.0)},
      "Active 1×1 PSD constraint at the solution; strict complementarity "
      "fails nowhere (Z = 2 > 0, G = 0).",
      1};
}

// Nearest PSD matrix to C = [[0,1],[1,0]] in the Frobenius norm, with
// X(x) = [[x0, x1], [x1, x2]]. Solution [C]+ = ½[[1,1],[1,1]].
CorpusEntry nearest_psd() {
  ProblemHooks h;
  h.f = [](const Vec& x) {
    return 0.5 * (x[0] * x[0] + 2.0 * (x[1] - 1.0) * (x[1] - 1.0) + x[2] * x[2]);
  };
  h.grad_f = [](const Vec& x) {
    return Vec{{x[0], 2.0 * (x[1] - 1.0), x[2]}};
  };
  h.hess_f = [](const Vec&) { return Mat(Vec{{1.0, 2.0, 1.0}}.asDiagonal()); };
  h.G = [](const Vec& x) { return sym2(x[0], x[1], x[2]); };
  h.dG = [](const Vec&, Index i) {
    switch (i) {
      case 0:
        return sym2(1.0, 0.0, 0.0);
      case 1:
        return sym2(0.0, 1.0, 0.0);
      default:
        return sym2(0.0, 0.0, 1.0);
    }
  };
  h.d2G = [](const Vec&, Index, Index) { return SymMatrix(2); };

  return CorpusEntry{
      NsdpProblem("nearest-psd", {3, 0, 2}, std::move(h), Vec{{1.0, 0.0, 1.0}}),
      Vec{{0.5, 0.5, 0.5}},
      MultiplierPair{Vec(0), sym2(0.5, -0.5, 0.5)},
      "Matrix-valued projection: G(x̄) has eigenvalues (1, 0); the multiplier "
      "Z = [C]+ − C spans the null eigenvector.",
      1};
}

// min x  s.t.  x² = 0. The feasible set is {0} and ∇g(0) = 0, so no KKT
// point exists: 1 − 2·0·y = 1 for every y. The PSD constraint is the
// constant [1] and never active.
CorpusEntry equality_degenerate() {
  ProblemHooks h;
  h.f = [](const Vec& x) { return x[0]; };
  h.grad_f = [](const Vec&) { return Vec::Constant(1, 1.0); };
  h.hess_f = [](const Vec&) { return Mat::Zero(1, 1); };
  h.g = [](const Vec& x) { return Vec::Constant(1, x[0] * x[0]); };
  h.jac_g = [](const Vec& x) { return Mat::Constant(1, 1, 2.0 * x[0]); };
  h.hess_g = [](const Vec&, Index) { return Mat::Constant(1, 1, 2.0); };
  h.G = [](const Vec&) { return scalar_matrix(1.0); };
  h.dG = [](const Vec&, Index) { return scalar_matrix(0.0); };
  h.d2G = [](const Vec&, Index, Index) { return scalar_matrix(0.0); };

  return CorpusEntry{
      NsdpProblem("equality-degenerate", {1, 1, 1}, std::move(h), Vec::Zero(1)),
      Vec::Zero(1),
      std::nullopt,
      "Constraint qualification fails: ∇g(0) = 0 and ∇_x L(0, y) = 1 for all "
      "y, so there is no KKT point. CAKKT holds at 0 with y_k = −γ x_k² "
      "unbounded.",
      0};
}

// 2×2 correlation-type matrix X = [[1 + p, b], [b, 1 + q]] with x = (p, b, q).
// The unit diagonal is imposed by g(x) = (p, q); f = ½(b + 1.5)². Offsets from
// the diagonal keep g exact near the solution, where a − 1 would lose all
// digits below eps. Solution b = −1.
CorpusEntry corr_matrix() {
  constexpr double target = -1.5;
  ProblemHooks h;
  h.f = [](const Vec& x) { return 0.5 * (x[1] - target) * (x[1] - target); };
  h.grad_f = [](const Vec& x) { return Vec{{0.0, x[1] - target, 0.0}}; };
  h.hess_f = [](const Vec&) { return Mat(Vec{{0.0, 1.0, 0.0}}.asDiagonal()); };
  h.g = [](const Vec& x) { return Vec{{x[0], x[2]}}; };
  h.jac_g = [](const Vec&) {
    Mat j = Mat::Zero(3, 2);
    j(0, 0) = 1.0;
    j(2, 1) = 1.0;
    return j;
  };
  h.hess_g = [](const Vec&, Index) { return Mat::Zero(3, 3); };
  h.G = [](const Vec& x) { return sym2(1.0 + x[0], x[1], 1.0 + x[2]); };
  h.dG = [](const Vec&, Index i) {
    switch (i) {
      case 0:
        return sym2(1.0, 0.0, 0.0);
      case 1:
        return sym2(0.0, 1.0, 0.0);
      default:
        return sym2(0.0, 0.0, 1.0);
    }
  };
  h.d2G = [](const Vec&, Index, Index) { return SymMatrix(2); };

  return CorpusEntry{
      NsdpProblem("corr-matrix", {3, 2, 2}, std::move(h), Vec::Zero(3)),
      Vec{{0.0, -1.0, 0.0}},
      MultiplierPair{Vec{{-0.25, -0.25}}, sym2(0.25, 0.25, 0.25)},
      "Mixed equality and PSD constraints; the off-diagonal hits the boundary "
      "b = −1 where G(x̄) = [[1,−1],[−1,1]] is singular.",
      1};
}

const std::map<std::string, CorpusEntry>& registry() {
  static const std::map<std::string, CorpusEntry> entries = [] {
    std::map<std::string, CorpusEntry> m;
    for (CorpusEntry e :
         {scalar_bound(), nearest_psd(), equality_degenerate(), corr_matrix()}) {
      std::string name = e.problem.name();
      m.emplace(std::move(name), std::move(e));
    }
    return m;
  }();
  return entries;
}

}  // namespace

const CorpusEntry& get_problem(const std::string& name) {
  const auto& reg = registry();
  const auto it = reg.find(name);
  if (it == reg.end()) {
    throw Error(ErrorCode::NotFound, "unknown problem '" + name + "'");
  }
  return it->second;
}

std::vector<std::string> list_problems() {
  return {"scalar-bound", "nearest-psd", "equality-degenerate", "corr-matrix"};
}

}  // namespace nsdp
