#ifndef UOS_OPERATORS_HPP
#define UOS_OPERATORS_HPP

#include <cstdint>
#include <string>
#include <utility>

#include "uos/core.hpp"

namespace uos {

struct EnsembleSpec {
  enum class Kind { Gaussian, Rademacher };
  Kind kind = Kind::Gaussian;
  Index m = 0;
  Index n = 0;
  double scale = 0.0;  // 0 means the default 1/sqrt(M), giving E|phi x|^2 = |x|^2
  std::uint64_t seed = 0;
};

inline double ensemble_default_scale(Index m) { return 1.0 / std::sqrt(static_cast<double>(m)); }

/// Dense ensemble draw; identical seed gives a bit-identical matrix.
inline MatrixXd ensemble_matrix(const EnsembleSpec& spec) {
  require(spec.m >= 1 && spec.n >= 1, "ensemble_matrix: M, N >= 1");
  const double scale = spec.scale > 0.0 ? spec.scale : ensemble_default_scale(spec.m);
  require(scale > 0.0, "ensemble_matrix: scale must be > 0");
  std::mt19937_64 rng(spec.seed);
  MatrixXd mat(spec.m, spec.n);
  if (spec.kind == EnsembleSpec::Kind::Gaussian) {
    std::normal_distribution<double> dist(0.0, 1.0);
    for (Index i = 0; i < spec.m; ++i)
      for (Index j = 0; j < spec.n; ++j) mat(i, j) = scale * dist(rng);
  } else {
    std::bernoulli_distribution coin(0.5);
    for (Index i = 0; i < spec.m; ++i)
      for (Index j = 0; j < spec.n; ++j) mat(i, j) = coin(rng) ? scale : -scale;
  }
  return mat;
}

/// i.i.d. N(0, scale^2) entries; default scale 1/sqrt(M) so E|phi x|^2 = |x|^2.
inline DenseOperator<double> make_gaussian(Index m, Index n, std::uint64_t seed,
                                           double scale = 0.0) {
  return DenseOperator<double>(
      ensemble_matrix({EnsembleSpec::Kind::Gaussian, m, n, scale, seed}));
}

/// Entries +-scale with equal probability; default scale 1/sqrt(M).
inline DenseOperator<double> make_rademacher(Index m, Index n, std::uint64_t seed,
                                             double scale = 0.0) {
  return DenseOperator<double>(
      ensemble_matrix({EnsembleSpec::Kind::Rademacher, m, n, scale, seed}));
}

/// Gaussian sensing map on column-major vectorized m x n matrices.
class MatrixSensingOperator final : public LinearOperator<double> {
 public:
  MatrixSensingOperator(MatrixXd mat, Index m, Index n)
      : mat_(std::move(mat)), m_(m), n_(n) {
    require(m >= 1 && n >= 1, "MatrixSensingOperator: m, n >= 1");
    if (mat_.cols() != m * n)
      throw DimensionError("MatrixSensingOperator: matrix columns must equal m*n");
  }

  Index rows() const override { return mat_.rows(); }
  Index cols() const override { return mat_.cols(); }
  Index matrix_rows() const { return m_; }
  Index matrix_cols() const { return n_; }

  Vector<double> apply(const Vector<double>& x) const override {
    if (x.size() != mat_.cols()) throw DimensionError("MatrixSensingOperator::apply");
    return mat_ * x;
  }
  Vector<double> apply_adjoint(const Vector<double>& w) const override {
    if (w.size() != mat_.rows()) throw DimensionError("MatrixSensingOperator::apply_adjoint");
    return mat_.transpose() * w;
  }
  Matrix<double> to_dense() const override { return mat_; }

  VectorXd apply_matrix(const MatrixXd& x) const { return apply(vec(x)); }
  MatrixXd adjoint_as_matrix(const VectorXd& w) const { return unvec(apply_adjoint(w), m_, n_); }

 private:
  MatrixXd mat_;
  Index m_, n_;
};

inline MatrixSensingOperator make_matrix_sensing(Index m, Index n, Index measurements,
                                                 std::uint64_t seed, double scale = 0.0) {
  return MatrixSensingOperator(
      ensemble_matrix({EnsembleSpec::Kind::Gaussian, measurements, m * n, scale, seed}), m, n);
}

/// Block-wise spectral mixing: output block i at grid index f is
/// sum_j phi(i,j) * (input block j at grid index f).  On the column-major
/// vectorization this is the block-diagonal stacking of phi over the grid.
template <class Scalar>
class SpectralMixingOperator final : public LinearOperator<Scalar> {
 public:
  SpectralMixingOperator(MatrixXd mixing, Index grid)
      : mixing_(std::move(mixing)), mixing_s_(mixing_.cast<Scalar>()), grid_(grid) {
    require(mixing_.rows() >= 1 && mixing_.cols() >= 1, "SpectralMixingOperator: mixing >= 1x1");
    require(grid >= 1, "SpectralMixingOperator: grid >= 1");
    require(all_finite(mixing_), "SpectralMixingOperator: mixing entries must be finite");
  }

  Index rows() const override { return mixing_.rows() * grid_; }
  Index cols() const override { return mixing_.cols() * grid_; }
  Index input_blocks() const { return mixing_.cols(); }
  Index output_blocks() const { return mixing_.rows(); }
  Index grid() const { return grid_; }
  const MatrixXd& mixing() const { return mixing_; }

  Matrix<Scalar> forward_blocks(const Matrix<Scalar>& x) const {
    if (x.rows() != mixing_.cols() || x.cols() != grid_)
      throw DimensionError("SpectralMixingOperator::forward_blocks: expected N x F block matrix");
    return mixing_s_ * x;
  }
  Matrix<Scalar> adjoint_blocks(const Matrix<Scalar>& y) const {
    if (y.rows() != mixing_.rows() || y.cols() != grid_)
      throw DimensionError("SpectralMixingOperator::adjoint_blocks: expected M x F block matrix");
    return mixing_s_.adjoint() * y;
  }

  Vector<Scalar> apply(const Vector<Scalar>& x) const override {
    if (x.size() != cols()) throw DimensionError("SpectralMixingOperator::apply");
    return vec<Scalar>(forward_blocks(unvec(x, mixing_.cols(), grid_)));
  }
  Vector<Scalar> apply_adjoint(const Vector<Scalar>& w) const override {
    if (w.size() != rows()) throw DimensionError("SpectralMixingOperator::apply_adjoint");
    return vec<Scalar>(adjoint_blocks(unvec(w, mixing_.rows(), grid_)));
  }

 private:
  MatrixXd mixing_;
  Matrix<Scalar> mixing_s_;
  Index grid_;
};

template <class Scalar>
Matrix<Scalar> spectral_mixing_forward(const SpectralMixingOperator<Scalar>& op,
                                       const Matrix<Scalar>& x) {
  return op.forward_blocks(x);
}

/// Both sides of the stacking identity: the output-block norm of Y1-Y2
/// against the per-grid-column sum of |phi(x1(f)-x2(f))|^2.  They agree up
/// to floating-point roundoff for every grid length.
template <class Scalar>
std::pair<double, double> stacking_norm_identity_check(const SpectralMixingOperator<Scalar>& op,
                                                       const Matrix<Scalar>& x1,
                                                       const Matrix<Scalar>& x2) {
  if (x1.rows() != x2.rows() || x1.cols() != x2.cols())
    throw DimensionError("stacking_norm_identity_check: X1, X2 shapes differ");
  const double lhs = (op.forward_blocks(x1) - op.forward_blocks(x2)).squaredNorm();
  const Matrix<Scalar> diff = x1 - x2;
  const Matrix<Scalar> mix = op.mixing().template cast<Scalar>();
  double rhs = 0.0;
  for (Index f = 0; f < diff.cols(); ++f) rhs += (mix * diff.col(f)).squaredNorm();
  return {lhs, rhs};
}

}  // namespace uos

#endif  // UOS_OPERATORS_HPP
