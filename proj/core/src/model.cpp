#include "nsdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "nsdp/error.hpp"

namespace nsdp {

NsdpProblem::NsdpProblem(std::string name, ProblemDims dims, ProblemHooks hooks,
                         Vec start_point, SecondDerivatives second)
    : name_(std::move(name)),
      dims_(dims),
      hooks_(std::move(hooks)),
      start_(std::move(start_point)),
      second_(second) {
  if (dims_.n < 1) throw_invalid("NsdpProblem: n must be >= 1");
  if (dims_.m < 0) throw_invalid("NsdpProblem: m must be >= 0");
  if (dims_.d < 1) throw_invalid("NsdpProblem: d must be >= 1");
  if (start_.size() != dims_.n) {
    throw_invalid("NsdpProblem: start point has wrong dimension");
  }
  if (!hooks_.f || !hooks_.grad_f || !hooks_.G || !hooks_.dG) {
    throw_invalid("NsdpProblem: f, grad_f, G and dG hooks are required");
  }
  if (dims_.m > 0 && (!hooks_.g || !hooks_.jac_g)) {
    throw_invalid("NsdpProblem: m > 0 requires g and jac_g hooks");
  }
  if (second_ == SecondDerivatives::Analytic) {
    if (!hooks_.hess_f || !hooks_.d2G || (dims_.m > 0 && !hooks_.hess_g)) {
      throw_invalid(
          "NsdpProblem: analytic mode requires hess_f, hess_g and d2G hooks");
    }
  }
}

void NsdpProblem::check_point(const Vec& x) const {
  if (x.size() != dims_.n) {
    throw_invalid("NsdpProblem '" + name_ + "': point has dimension " +
                  std::to_string(x.size()) + ", expected " +
                  std::to_string(dims_.n));
  }
}

void NsdpProblem::check_index(Index i, Index bound, const char* what) const {
  if (i < 0 || i >= bound) {
    throw_invalid(std::string("NsdpProblem: ") + what + " index out of range");
  }
}

double NsdpProblem::eval_f(const Vec& x) const {
  check_point(x);
  return hooks_.f(x);
}

Vec NsdpProblem::grad_f(const Vec& x) const {
  check_point(x);
  Vec out = hooks_.grad_f(x);
  if (out.size() != dims_.n) throw_invalid("grad_f hook returned wrong size");
  return out;
}

Mat NsdpProblem::hess_f(const Vec& x) const {
  check_point(x);
  if (second_ == SecondDerivatives::Analytic) {
    Mat out = hooks_.hess_f(x);
    if (out.rows() != dims_.n || out.cols() != dims_.n) {
      throw_invalid("hess_f hook returned wrong size");
    }
    return 0.5 * (out + out.transpose());
  }
  Mat out(dims_.n, dims_.n);
  for (Index i = 0; i < dims_.n; ++i) {
    const double h = fd_step(x[i]);
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    out.col(i) = (grad_f(xp) - grad_f(xm)) / (2.0 * h);
  }
  return 0.5 * (out + out.transpose());
}

Vec NsdpProblem::eval_g(const Vec& x) const {
  check_point(x);
  if (dims_.m == 0) return Vec(0);
  Vec out = hooks_.g(x);
  if (out.size() != dims_.m) throw_invalid("g hook returned wrong size");
  return out;
}

Mat NsdpProblem::jac_g(const Vec& x) const {
  check_point(x);
  if (dims_.m == 0) return Mat(dims_.n, 0);
  Mat out = hooks_.jac_g(x);
  if (out.rows() != dims_.n || out.cols() != dims_.m) {
    throw_invalid("jac_g hook returned wrong size (expected n×m)");
  }
  return out;
}

Mat NsdpProblem::hess_g(const Vec& x, Index j) const {
  check_point(x);
  check_index(j, dims_.m, "constraint");
  if (second_ == SecondDerivatives::Analytic) {
    Mat out = hooks_.hess_g(x, j);
    if (out.rows() != dims_.n || out.cols() != dims_.n) {
      throw_invalid("hess_g hook returned wrong size");
    }
    return 0.5 * (out + out.transpose());
  }
  Mat out(dims_.n, dims_.n);
  for (Index i = 0; i < dims_.n; ++i) {
    const double h = fd_step(x[i]);
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    out.col(i) = (jac_g(xp).col(j) - jac_g(xm).col(j)) / (2.0 * h);
  }
  return 0.5 * (out + out.transpose());
}

SymMatrix NsdpProblem::eval_G(const Vec& x) const {
  check_point(x);
  SymMatrix out = hooks_.G(x);
  if (out.dim() != dims_.d) throw_invalid("G hook returned wrong dimension");
  return out;
}

SymMatrix NsdpProblem::dG_partial(const Vec& x, Index i) const {
  check_point(x);
  check_index(i, dims_.n, "variable");
  SymMatrix out = hooks_.dG(x, i);
  if (out.dim() != dims_.d) throw_invalid("dG hook returned wrong dimension");
  return out;
}

SymMatrix NsdpProblem::d2G_partial(const Vec& x, Index i, Index j) const {
  check_point(x);
  check_index(i, dims_.n, "variable");
  check_index(j, dims_.n, "variable");
  if (second_ == SecondDerivatives::Analytic) {
    SymMatrix out = hooks_.d2G(x, i, j);
    if (out.dim() != dims_.d) throw_invalid("d2G hook returned wrong dimension");
    return out;
  }
  // Average both differencing orders so that G_ij == G_ji exactly.
  auto diff = [&](Index along, Index partial) {
    const double h = fd_step(x[along]);
    Vec xp = x, xm = x;
    xp[along] += h;
    xm[along] -= h;
    return (1.0 / (2.0 * h)) * (dG_partial(xp, partial) - dG_partial(xm, partial));
  };
  if (i == j) return diff(i, j);
  return 0.5 * (diff(i, j) + diff(j, i));
}

std::vector<SymMatrix> NsdpProblem::dG_partials(const Vec& x) const {
  std::vector<SymMatrix> out;
  out.reserve(static_cast<std::size_t>(dims_.n));
  for (Index i = 0; i < dims_.n; ++i) out.push_back(dG_partial(x, i));
  return out;
}

SymMatrix dG_apply(const NsdpProblem& prob, const Vec& x, const Vec& h) {
  if (h.size() != prob.n()) throw_invalid("dG_apply: direction has wrong size");
  SymMatrix out(prob.d());
  for (Index i = 0; i < prob.n(); ++i) {
    if (h[i] != 0.0) out += h[i] * prob.dG_partial(x, i);
  }
  return out;
}

Vec dG_adjoint(const NsdpProblem& prob, const Vec& x, const SymMatrix& z) {
  if (z.dim() != prob.d()) throw_invalid("dG_adjoint: Z has wrong dimension");
  Vec out(prob.n());
  for (Index i = 0; i < prob.n(); ++i) out[i] = inner(prob.dG_partial(x, i), z);
  return out;
}

double relative_error(const Mat& a, const Mat& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

const HookAudit* DerivativeAuditReport::worst() const {
  const HookAudit* best = nullptr;
  double best_ratio = -1.0;
  for (const auto& e : entries) {
    const double ratio = e.finite ? e.error / e.threshold
                                  : std::numeric_limits<double>::infinity();
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = &e;
    }
  }
  return best;
}

namespace {

// Runs one audit comparison; exceptions and non-finite values become a failed
// entry instead of aborting the audit.
template <class Analytic, class Numeric>
HookAudit audit_one(std::string hook, Index i, Index j, double threshold,
                    Analytic&& analytic, Numeric&& numeric) {
  HookAudit entry;
  entry.hook = std::move(hook);
  entry.i = i;
  entry.j = j;
  entry.threshold = threshold;
  try {
    const Mat a = analytic();
    const Mat b = numeric();
    if (!a.allFinite() || !b.allFinite()) {
      entry.finite = false;
    } else {
      entry.error = relative_error(a, b);
    }
  } catch (const std::exception&) {
    entry.finite = false;
  }
  if (!entry.finite) entry.error = std::numeric_limits<double>::infinity();
  entry.passed = entry.finite && entry.error <= threshold;
  return entry;
}

Mat as_mat(const Vec& v) { return Mat(v); }

}  // namespace

DerivativeAuditReport audit_derivatives(const NsdpProblem& prob, const Vec& x,
                                        double step,
                                        AuditThresholds thresholds) {
  if (!(step > 0.0)) throw_invalid("audit_derivatives: step must be > 0");
  if (x.size() != prob.n()) throw_invalid("audit_derivatives: wrong point size");

  const Index n = prob.n();
  DerivativeAuditReport report;
  report.step = step;

  auto shifted = [&](Index i, double sign) {
    Vec y = x;
    y[i] += sign * step * (1.0 + std::abs(x[i]));
    return y;
  };
  auto width = [&](Index i) { return 2.0 * step * (1.0 + std::abs(x[i])); };

  // Central difference of a matrix-valued function, column i <- direction i.
  auto fd_columns = [&](auto&& fn, Index rows) {
    Mat out(rows, n);
    for (Index i = 0; i < n; ++i) {
      out.col(i) = (fn(shifted(i, 1.0)) - fn(shifted(i, -1.0))) / width(i);
    }
    return out;
  };

  report.entries.push_back(audit_one(
      "grad_f", -1, -1, thresholds.first_order,
      [&] { return as_mat(prob.grad_f(x)); },
      [&] {
        Mat col(n, 1);
        for (Index i = 0; i < n; ++i) {
          col(i, 0) =
              (prob.eval_f(shifted(i, 1.0)) - prob.eval_f(shifted(i, -1.0))) /
              width(i);
        }
        return col;
      }));

  report.entries.push_back(audit_one(
      "hess_f", -1, -1, thresholds.second_order, [&] { return prob.hess_f(x); },
      [&] {
        return fd_columns([&](const Vec& y) { return prob.grad_f(y); }, n);
      }));

  if (prob.m() > 0) {
    report.entries.push_back(audit_one(
        "jac_g", -1, -1, thresholds.first_order,
        [&] { return Mat(prob.jac_g(x).transpose()); },
        [&] {
          return fd_columns([&](const Vec& y) { return prob.eval_g(y); },
                            prob.m());
        }));
    for (Index j = 0; j < prob.m(); ++j) {
      report.entries.push_back(audit_one(
          "hess_g", j, -1, thresholds.second_order,
          [&] { return prob.hess_g(x, j); },
          [&] {
            return fd_columns(
                [&](const Vec& y) { return Vec(prob.jac_g(y).col(j)); }, n);
          }));
    }
  }

  for (Index i = 0; i < n; ++i) {
    report.entries.push_back(audit_one(
        "dG", i, -1, thresholds.first_order,
        [&] { return prob.dG_partial(x, i).matrix(); },
        [&] {
          return Mat((prob.eval_G(shifted(i, 1.0)).matrix() -
                      prob.eval_G(shifted(i, -1.0)).matrix()) /
                     width(i));
        }));
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      report.entries.push_back(audit_one(
          "d2G", i, j, thresholds.second_order,
          [&] { return prob.d2G_partial(x, i, j).matrix(); },
          [&] {
            return Mat((prob.dG_partial(shifted(i, 1.0), j).matrix() -
                        prob.dG_partial(shifted(i, -1.0), j).matrix()) /
                       width(i));
          }));
    }
  }

  report.passed = std::all_of(report.entries.begin(), report.entries.end(),
                              [](const HookAudit& e) { return e.passed; });
  return report;
}

}  // namespace nsdp
