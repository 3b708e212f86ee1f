#include "nsdp/matfun.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "nsdp/error.hpp"

namespace nsdp {

SymMatrix::SymMatrix(Index dim) {
  if (dim < 1) throw_invalid("SymMatrix: dimension must be >= 1");
  a_ = Mat::Zero(dim, dim);
}

SymMatrix::SymMatrix(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw_invalid("SymMatrix: expected a nonempty square matrix");
  }
  a_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(Index dim) {
  return SymMatrix(Mat::Identity(dim, dim));
}

SymMatrix SymMatrix::diagonal(const Vec& diag) {
  return SymMatrix(Mat(diag.asDiagonal()));
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.dim() != dim()) throw_invalid("SymMatrix: dimension mismatch in +");
  a_ += o.a_;
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.dim() != dim()) throw_invalid("SymMatrix: dimension mismatch in -");
  a_ -= o.a_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  a_ *= s;
  return *this;
}

double inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw_invalid("inner: dimension mismatch");
  return a.matrix().cwiseProduct(b.matrix()).sum();
}

SymMatrix jordan_product(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw_invalid("jordan_product: dimension mismatch");
  const Mat ab = a.matrix() * b.matrix();
  // (AB + BA)/2 = (AB + (AB)^T)/2 for symmetric A, B.
  return SymMatrix(ab);
}

SymMatrix symmetric_from_parts(const Mat& vectors, const Vec& values) {
  return SymMatrix(Mat(vectors * values.asDiagonal() * vectors.transpose()));
}

EigenDecomp eig_sym(const SymMatrix& x) {
  if (!x.all_finite()) throw_invalid("eig_sym: non-finite matrix entries");
  const Index d = x.dim();
  Eigen::SelfAdjointEigenSolver<Mat> solver(x.matrix());
  if (solver.info() != Eigen::Success) {
    throw_invalid("eig_sym: eigensolver did not converge");
  }
  EigenDecomp dec;
  dec.values.resize(d);
  dec.vectors.resize(d, d);
  dec.source_norm = x.norm();
  // Eigen returns ascending order.
  for (Index j = 0; j < d; ++j) {
    dec.values[j] = solver.eigenvalues()[d - 1 - j];
    dec.vectors.col(j) = solver.eigenvectors().col(d - 1 - j);
  }
  for (Index j = 0; j < d; ++j) {
    auto col = dec.vectors.col(j);
    for (Index i = 0; i < d; ++i) {
      if (std::abs(col[i]) > 1e-10) {
        if (col[i] < 0.0) col = -col;
        break;
      }
    }
  }
  return dec;
}

double default_eig_tolerance(const EigenDecomp& dec) {
  return std::max(kEigAbsTol, kEigRelTol * dec.source_norm);
}

EigClassification::Kind EigClassification::kind(Index j) const {
  if (std::find(pos.begin(), pos.end(), j) != pos.end()) return Kind::Pos;
  if (std::find(neg.begin(), neg.end(), j) != neg.end()) return Kind::Neg;
  return Kind::Zero;
}

EigClassification classify_eigs(const EigenDecomp& dec,
                                std::optional<double> tol) {
  EigClassification cls;
  cls.tol = tol.value_or(default_eig_tolerance(dec));
  if (cls.tol < 0.0) throw_invalid("classify_eigs: tolerance must be >= 0");
  for (Index j = 0; j < dec.dim(); ++j) {
    const double lam = dec.values[j];
    if (lam > cls.tol) {
      cls.pos.push_back(j);
    } else if (lam < -cls.tol) {
      cls.neg.push_back(j);
    } else {
      cls.zero.push_back(j);
    }
  }
  return cls;
}

namespace {

double pos_part(double r) { return r > 0.0 ? r : 0.0; }

}  // namespace

SymMatrix proj_psd(const EigenDecomp& dec) {
  return spectral_map(dec, pos_part);
}

SymMatrix proj_psd(const SymMatrix& x) { return proj_psd(eig_sym(x)); }

SymMatrix abs_spectral(const SymMatrix& x) {
  return spectral_map(eig_sym(x), [](double r) { return std::abs(r); });
}

SymMatrix q_cube(const EigenDecomp& dec) {
  return spectral_map(dec, [](double r) {
    const double p = pos_part(r);
    return p * p * p;
  });
}

SymMatrix q_cube(const SymMatrix& x) { return q_cube(eig_sym(x)); }

double quartic_trace(const EigenDecomp& dec) {
  double sum = 0.0;
  for (Index j = 0; j < dec.dim(); ++j) {
    const double p = pos_part(dec.values[j]);
    const double p2 = p * p;
    sum += p2 * p2;
  }
  return sum;
}

double quartic_trace(const SymMatrix& x) { return quartic_trace(eig_sym(x)); }

SymMatrix pinv_spectral(const EigenDecomp& dec, std::optional<double> tol) {
  const double t = tol.value_or(default_eig_tolerance(dec));
  return spectral_map(dec,
                      [t](double r) { return std::abs(r) > t ? 1.0 / r : 0.0; });
}

DQOperator dq_coeff(const EigenDecomp& dec, const EigClassification& cls) {
  const Index d = dec.dim();
  DQOperator op;
  op.basis = dec.vectors;
  op.coeff = Mat::Zero(d, d);
  const Vec& lam = dec.values;

  for (Index i : cls.pos) {
    for (Index j : cls.pos) {
      op.coeff(i, j) = lam[i] * lam[i] + lam[i] * lam[j] + lam[j] * lam[j];
    }
    for (Index j : cls.zero) {
      op.coeff(i, j) = lam[i] * lam[i];
      op.coeff(j, i) = op.coeff(i, j);
    }
    // λi > tol >= 0 > -tol > λj, so the denominator is positive.
    for (Index j : cls.neg) {
      op.coeff(i, j) = lam[i] * lam[i] * lam[i] / (lam[i] - lam[j]);
      op.coeff(j, i) = op.coeff(i, j);
    }
  }
  return op;
}

DQOperator dq_at(const SymMatrix& x) {
  const EigenDecomp dec = eig_sym(x);
  return dq_coeff(dec, classify_eigs(dec));
}

SymMatrix dq_apply(const DQOperator& op, const SymMatrix& h) {
  if (h.dim() != op.dim()) throw_invalid("dq_apply: dimension mismatch");
  const Mat& p = op.basis;
  const Mat rotated = p.transpose() * h.matrix() * p;
  return SymMatrix(Mat(p * op.coeff.cwiseProduct(rotated) * p.transpose()));
}

}  // namespace nsdp
