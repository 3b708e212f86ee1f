#include "nsdp/trust_region.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsdp/error.hpp"

namespace nsdp {

void TrConfig::validate() const {
  if (!(delta0_radius > 0.0)) throw_invalid("TrConfig: delta0_radius must be > 0");
  if (max_iter < 0) throw_invalid("TrConfig: max_iter must be >= 0");
  if (!(0.0 < eta1 && eta1 < eta2 && eta2 < 1.0)) {
    throw_invalid("TrConfig: need 0 < eta1 < eta2 < 1");
  }
  if (!(0.0 < shrink && shrink < 1.0 && grow > 1.0)) {
    throw_invalid("TrConfig: need 0 < shrink < 1 < grow");
  }
  if (!(radius_min > 0.0 && radius_max > radius_min)) {
    throw_invalid("TrConfig: need 0 < radius_min < radius_max");
  }
}

const char* to_string(TrStatus status) {
  switch (status) {
    case TrStatus::Converged:
      return "Converged";
    case TrStatus::MaxIter:
      return "MaxIter";
    case TrStatus::RadiusCollapse:
      return "RadiusCollapse";
  }
  return "Unknown";
}

TrSubproblemSolution ms_subproblem(const Mat& b, const Vec& g, double radius) {
  const Index n = g.size();
  if (b.rows() != n || b.cols() != n) throw_invalid("ms_subproblem: size mismatch");
  if (!b.allFinite() || !g.allFinite() || !std::isfinite(radius)) {
    throw_invalid("ms_subproblem: non-finite input");
  }
  if (!(radius > 0.0)) throw_invalid("ms_subproblem: radius must be > 0");

  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (b + b.transpose()));
  const Vec& lam = eig.eigenvalues();  // ascending
  const Mat& q = eig.eigenvectors();
  const Vec gt = q.transpose() * g;
  const double lmin = n > 0 ? lam[0] : 0.0;
  const double gnorm = g.norm();
  const double scale = std::max({1.0, lam.cwiseAbs().maxCoeff(), gnorm});

  // Components in the eigenspace of λ_min.
  const double cluster = 1e-12 * scale;
  Index nmin = 0;
  while (nmin < n && lam[nmin] - lmin <= cluster) ++nmin;
  const double g_min = gt.head(nmin).norm();

  auto step_at = [&](double s, Index skip) {
    Vec coeff = Vec::Zero(n);
    for (Index i = skip; i < n; ++i) coeff[i] = -gt[i] / (lam[i] + s);
    return coeff;
  };

  TrSubproblemSolution out;

  // Interior Newton step.
  if (lmin > 0.0) {
    const Vec c = step_at(0.0, 0);
    if (c.norm() <= radius) {
      out.step = q * c;
      out.multiplier = 0.0;
      out.interior = true;
      return out;
    }
  }

  const double lo = std::max(0.0, -lmin);

  // Hard case: g has (numerically) no component along the λ_min eigenspace and
  // the step at λ = −λ_min stays inside the region.
  if (g_min <= 1e-10 * std::max(gnorm, std::numeric_limits<double>::min())) {
    Vec c = step_at(lo, nmin);
    const double cn = c.norm();
    if (cn <= radius) {
      out.multiplier = lo;
      if (lmin < 0.0) {
        c[0] = std::sqrt(std::max(0.0, radius * radius - cn * cn));
        out.hard_case = true;
      } else {
        out.interior = true;
      }
      out.step = q * c;
      return out;
    }
  }

  // Boundary solution: φ(s) = 1/radius − 1/||p(s)|| is decreasing on (lo, ∞),
  // positive near lo and nonpositive at hi.
  auto norm_at = [&](double s) {
    double sum = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double r = gt[i] / (lam[i] + s);
      sum += r * r;
    }
    return std::sqrt(sum);
  };
  double a = lo;
  double bhi = lo + gnorm / radius;
  double s = bhi;
  for (int it = 0; it < 500; ++it) {
    const double pn = norm_at(s);
    if (std::abs(pn - radius) <= 1e-14 * radius) break;
    if (pn > radius) {
      a = s;
    } else {
      bhi = s;
    }
    double dsum = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double den = lam[i] + s;
      dsum += gt[i] * gt[i] / (den * den * den);
    }
    // Newton on φ: φ'(s) = −dsum/||p||³.
    const double phi = 1.0 / radius - 1.0 / pn;
    const double dphi = -dsum / (pn * pn * pn);
    double next = s - phi / dphi;
    if (!(next > a && next < bhi) || !std::isfinite(next)) next = 0.5 * (a + bhi);
    if (next == s || bhi - a <= 4.0 * std::numeric_limits<double>::epsilon() *
                                     std::max(1.0, std::abs(bhi))) {
      s = next;
      break;
    }
    s = next;
  }
  out.multiplier = s;
  out.step = q * step_at(s, 0);
  return out;
}

namespace {

double min_eig(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(0.5 * (h + h.transpose()),
                                            Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

}  // namespace

TrResult tr_minimize(const SmoothObjective& objective, const Vec& x0,
                     double delta, const TrConfig& cfg) {
  cfg.validate();
  if (!(delta > 0.0 && delta < 1.0)) {
    throw_invalid("tr_minimize: delta must lie in (0, 1)");
  }
  if (!objective.value || !objective.gradient || !objective.hessian) {
    throw_invalid("tr_minimize: objective hooks are required");
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  TrResult res;
  res.x = x0;
  double f = objective.value(res.x);
  Vec g = objective.gradient(res.x);
  Mat h = objective.hessian(res.x);
  if (!std::isfinite(f) || !g.allFinite() || !h.allFinite()) {
    throw_invalid("tr_minimize: non-finite objective at the start point");
  }
  double radius = cfg.delta0_radius;

  for (;;) {
    res.value = f;
    res.grad_norm = g.norm();
    res.min_hess_eig = min_eig(h);
    if (res.grad_norm <= delta && res.min_hess_eig >= -delta) {
      res.status = TrStatus::Converged;
      return res;
    }
    if (res.iterations >= cfg.max_iter) {
      res.status = TrStatus::MaxIter;
      return res;
    }
    if (radius < cfg.radius_min) {
      res.status = TrStatus::RadiusCollapse;
      return res;
    }

    const TrSubproblemSolution sub = ms_subproblem(h, g, radius);
    const Vec& p = sub.step;
    const double pnorm = p.norm();
    const double predicted = -(g.dot(p) + 0.5 * p.dot(h * p));
    const Vec x_new = res.x + p;
    const double f_new = objective.value(x_new);
    ++res.iterations;

    const double noise = 64.0 * kEps * std::max(1.0, std::abs(f));
    const double actual = f - f_new;
    double ratio;
    bool accept;
    if (!std::isfinite(f_new)) {
      ratio = -1.0;
      accept = false;
    } else if (predicted <= noise) {
      // The model decrease is below what the objective can resolve.
      accept = actual >= -noise;
      ratio = accept ? 1.0 : -1.0;
    } else {
      ratio = actual / predicted;
      accept = ratio > cfg.eta1;
    }

    if (ratio < cfg.eta1) {
      radius = cfg.shrink * std::min(radius, pnorm);
    } else if (ratio > cfg.eta2 && pnorm >= 0.99 * radius) {
      radius = std::min(cfg.grow * radius, cfg.radius_max);
    }

    if (accept) {
      Vec g_new = objective.gradient(x_new);
      Mat h_new = objective.hessian(x_new);
      if (g_new.allFinite() && h_new.allFinite()) {
        res.x = x_new;
        f = f_new;
        g = std::move(g_new);
        h = std::move(h_new);
      } else {
        radius = cfg.shrink * std::min(radius, pnorm);
      }
    }
  }
}

}  // namespace nsdp
