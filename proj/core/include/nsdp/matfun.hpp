#pragma once

// Spectral matrix functions on real symmetric matrices: eigendecomposition,
// the PSD projection [X]+, the cube map Q(X) = [X]+^3, tr([X]+^4) and the
// Frechet derivative DQ(X)[H] in its eigenbasis (divided-difference) form.

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <vector>

namespace nsdp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Dense real symmetric matrix. Symmetry is enforced on construction by
/// averaging with the transpose, so stored entries satisfy a(i,j) == a(j,i).
class SymMatrix {
 public:
  /// Zero matrix of dimension `dim` (>= 1).
  explicit SymMatrix(Index dim = 1);
  /// Symmetrizes (m + m^T)/2. Throws InvalidInput if `m` is not square or empty.
  explicit SymMatrix(const Mat& m);

  static SymMatrix identity(Index dim);
  static SymMatrix diagonal(const Vec& diag);

  Index dim() const { return a_.rows(); }
  const Mat& matrix() const { return a_; }
  double operator()(Index i, Index j) const { return a_(i, j); }
  double norm() const { return a_.norm(); }
  bool all_finite() const { return a_.allFinite(); }

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
  friend SymMatrix operator-(SymMatrix a) { return a *= -1.0; }

 private:
  Mat a_;
};

/// Frobenius inner product <A, B> = tr(A B).
double inner(const SymMatrix& a, const SymMatrix& b);

/// Jordan product A ∘ B = (AB + BA)/2.
SymMatrix jordan_product(const SymMatrix& a, const SymMatrix& b);

/// P diag(values) P^T, symmetrized.
SymMatrix symmetric_from_parts(const Mat& vectors, const Vec& values);

struct EigenDecomp {
  Vec values;         ///< descending
  Mat vectors;        ///< column j pairs with values[j]
  double source_norm = 0.0;

  Index dim() const { return values.size(); }
  SymMatrix reconstruct() const { return symmetric_from_parts(vectors, values); }
};

/// Symmetric eigendecomposition with eigenvalues in descending order.
/// Eigenvector signs are fixed so that the first component with magnitude
/// above 1e-10 is positive. Throws InvalidInput on non-finite entries.
EigenDecomp eig_sym(const SymMatrix& x);

inline constexpr double kEigAbsTol = 1e-12;
inline constexpr double kEigRelTol = 1e-10;

/// max(1e-12, 1e-10 * ||X||_F).
double default_eig_tolerance(const EigenDecomp& dec);

/// Index partition of a descending spectrum: pos = {λ > tol}, zero = {|λ| <= tol},
/// neg = {λ < -tol}. Indices are 0-based.
struct EigClassification {
  std::vector<Index> pos;
  std::vector<Index> zero;
  std::vector<Index> neg;
  double tol = 0.0;

  enum class Kind { Pos, Zero, Neg };
  Kind kind(Index j) const;
};

EigClassification classify_eigs(const EigenDecomp& dec,
                                std::optional<double> tol = std::nullopt);

/// Applies a scalar function to the spectrum: P diag(fn(λ)) P^T.
template <class Fn>
SymMatrix spectral_map(const EigenDecomp& dec, Fn&& fn) {
  Vec mapped(dec.dim());
  for (Index j = 0; j < dec.dim(); ++j) mapped[j] = fn(dec.values[j]);
  return symmetric_from_parts(dec.vectors, mapped);
}

SymMatrix proj_psd(const SymMatrix& x);
SymMatrix proj_psd(const EigenDecomp& dec);
SymMatrix abs_spectral(const SymMatrix& x);
SymMatrix q_cube(const SymMatrix& x);
SymMatrix q_cube(const EigenDecomp& dec);
double quartic_trace(const SymMatrix& x);
double quartic_trace(const EigenDecomp& dec);

/// Moore–Penrose inverse: eigenvalues with |λ| > tol are inverted, the rest
/// are mapped to zero. Default tol is default_eig_tolerance.
SymMatrix pinv_spectral(const EigenDecomp& dec,
                        std::optional<double> tol = std::nullopt);

/// DQ(X) materialized in the eigenbasis of X:
///   DQ(X)[H] = P (C ∘ P^T H P) P^T.
struct DQOperator {
  Mat basis;  ///< P
  Mat coeff;  ///< C(X), symmetric, nonnegative

  Index dim() const { return basis.rows(); }
};

/// Fills C(X) from the case table over (pos, zero, neg) index pairs:
///   (pos,pos):             λi² + λiλj + λj²
///   (pos,zero),(zero,pos): λpos²
///   (pos,neg),(neg,pos):   λpos³ / (λpos − λneg)
///   otherwise:             0
DQOperator dq_coeff(const EigenDecomp& dec, const EigClassification& cls);

/// Convenience: decomposes and classifies X with the default tolerance.
DQOperator dq_at(const SymMatrix& x);

/// DQ(X)[H]. Throws InvalidInput when dimensions disagree.
SymMatrix dq_apply(const DQOperator& op, const SymMatrix& h);

}  // namespace nsdp
