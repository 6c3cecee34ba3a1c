#ifndef UOS_CORE_HPP
#define UOS_CORE_HPP

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace uos {

using Index = Eigen::Index;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using VectorXcd = Vector<std::complex<double>>;
using MatrixXd = Matrix<double>;
using MatrixXcd = Matrix<std::complex<double>>;

template <class Scalar>
struct is_complex_scalar : std::false_type {};
template <class Real>
struct is_complex_scalar<std::complex<Real>> : std::true_type {};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Enumeration guard tripped; the exhaustive path refuses and points at Monte-Carlo.
class EnumerationLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ParameterError(what);
}

template <class A, class B>
void require_same_size(const A& a, const B& b, const char* what) {
  if (a.size() != b.size())
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

/// Real part of the inner product <a,b> (conjugate-linear in a).
template <class Scalar>
double real_inner(const Vector<Scalar>& a, const Vector<Scalar>& b) {
  require_same_size(a, b, "real_inner");
  return static_cast<double>(std::real(a.dot(b)));
}

template <class Scalar>
double norm_sq(const Vector<Scalar>& v) {
  return static_cast<double>(v.squaredNorm());
}

template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

/// Measurement map phi: forward H -> L plus its adjoint, declared dimensions.
/// Implementations are immutable after construction; application is pure.
template <class Scalar>
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual Index rows() const = 0;  // output dimension M
  virtual Index cols() const = 0;  // input dimension N

  virtual Vector<Scalar> apply(const Vector<Scalar>& x) const = 0;
  virtual Vector<Scalar> apply_adjoint(const Vector<Scalar>& w) const = 0;

  /// Materialize as a dense matrix by applying to the standard basis.
  virtual Matrix<Scalar> to_dense() const {
    Matrix<Scalar> out(rows(), cols());
    Vector<Scalar> e = Vector<Scalar>::Zero(cols());
    for (Index j = 0; j < cols(); ++j) {
      e[j] = Scalar(1);
      out.col(j) = apply(e);
      e[j] = Scalar(0);
    }
    return out;
  }
};

template <class Scalar>
class DenseOperator final : public LinearOperator<Scalar> {
 public:
  explicit DenseOperator(Matrix<Scalar> mat) : mat_(std::move(mat)) {
    require(mat_.rows() >= 1 && mat_.cols() >= 1, "DenseOperator: dimensions must be >= 1");
    require(all_finite(mat_), "DenseOperator: entries must be finite");
  }

  Index rows() const override { return mat_.rows(); }
  Index cols() const override { return mat_.cols(); }

  Vector<Scalar> apply(const Vector<Scalar>& x) const override {
    if (x.size() != mat_.cols()) throw DimensionError("DenseOperator::apply: dimension mismatch");
    return mat_ * x;
  }
  Vector<Scalar> apply_adjoint(const Vector<Scalar>& w) const override {
    if (w.size() != mat_.rows())
      throw DimensionError("DenseOperator::apply_adjoint: dimension mismatch");
    return mat_.adjoint() * w;
  }
  Matrix<Scalar> to_dense() const override { return mat_; }

  const Matrix<Scalar>& matrix() const { return mat_; }

 private:
  Matrix<Scalar> mat_;
};

template <class Scalar>
class ScaledIdentityOperator final : public LinearOperator<Scalar> {
 public:
  ScaledIdentityOperator(Index n, Scalar scale) : n_(n), scale_(scale) {
    require(n >= 1, "ScaledIdentityOperator: dimension must be >= 1");
  }
  Index rows() const override { return n_; }
  Index cols() const override { return n_; }
  Vector<Scalar> apply(const Vector<Scalar>& x) const override {
    if (x.size() != n_) throw DimensionError("ScaledIdentityOperator::apply");
    return scale_ * x;
  }
  Vector<Scalar> apply_adjoint(const Vector<Scalar>& w) const override {
    if (w.size() != n_) throw DimensionError("ScaledIdentityOperator::apply_adjoint");
    using std::conj;
    return Scalar(conj(scale_)) * w;
  }

 private:
  Index n_;
  Scalar scale_;
};

template <class Scalar>
Scalar draw_standard_normal(std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  if constexpr (is_complex_scalar<Scalar>::value) {
    const double re = dist(rng);
    const double im = dist(rng);
    return Scalar(re, im);
  } else {
    return dist(rng);
  }
}

template <class Scalar>
Vector<Scalar> random_normal_vector(Index n, std::mt19937_64& rng) {
  Vector<Scalar> v(n);
  for (Index i = 0; i < n; ++i) v[i] = draw_standard_normal<Scalar>(rng);
  return v;
}

struct PowerIterationResult {
  double value = 0.0;  // estimate of the largest squared singular value
  bool converged = false;
  int iterations = 0;
};

/// Largest squared singular value of phi by power iteration on phi* phi.
/// The Rayleigh-quotient estimate is monotonically nondecreasing, so the
/// returned value approaches the true norm from below.  The start vector
/// uses a fixed seed so repeated calls are identical.
template <class Scalar>
PowerIterationResult operator_norm_sq(const LinearOperator<Scalar>& op, double tol = 1e-12,
                                      int max_iters = 10000) {
  require(tol > 0.0, "operator_norm_sq: tol must be > 0");
  require(max_iters >= 1, "operator_norm_sq: max_iters must be >= 1");

  std::mt19937_64 rng(0x5eedf00dULL);
  Vector<Scalar> v = random_normal_vector<Scalar>(op.cols(), rng);
  double vn = v.norm();
  if (vn == 0.0) {
    v.setZero();
    v[0] = Scalar(1);
    vn = 1.0;
  }
  v /= vn;

  PowerIterationResult res;
  double prev = -1.0;
  for (int k = 0; k < max_iters; ++k) {
    Vector<Scalar> w = op.apply(v);
    const double lambda = w.squaredNorm();  // Rayleigh quotient of phi*phi at unit v
    res.value = lambda;
    res.iterations = k + 1;
    if (lambda == 0.0) {
      res.converged = true;
      return res;
    }
    if (prev >= 0.0 && std::abs(lambda - prev) <= tol * lambda) {
      res.converged = true;
      return res;
    }
    prev = lambda;
    Vector<Scalar> z = op.apply_adjoint(w);
    const double zn = z.norm();
    if (zn == 0.0) {
      res.converged = true;
      return res;
    }
    v = z / zn;
  }
  return res;  // best estimate, converged == false
}

template <class Scalar>
struct Residual {
  Vector<Scalar> value;  // y - phi x
  double norm = 0.0;
};

template <class Scalar>
Residual<Scalar> residual(const LinearOperator<Scalar>& op, const Vector<Scalar>& x,
                          const Vector<Scalar>& y) {
  if (x.size() != op.cols()) throw DimensionError("residual: x does not match operator input");
  if (y.size() != op.rows()) throw DimensionError("residual: y does not match operator output");
  Residual<Scalar> r;
  r.value = y - op.apply(x);
  r.norm = r.value.norm();
  return r;
}

/// Column-major reshape helpers between vectors and m x n matrices.
template <class Scalar>
Matrix<Scalar> unvec(const Vector<Scalar>& x, Index m, Index n) {
  if (x.size() != m * n) throw DimensionError("unvec: size mismatch");
  return Eigen::Map<const Matrix<Scalar>>(x.data(), m, n);
}

template <class Scalar>
Vector<Scalar> vec(const Matrix<Scalar>& mat) {
  return Eigen::Map<const Vector<Scalar>>(mat.data(), mat.size());
}

}  // namespace uos

#endif  // UOS_CORE_HPP
