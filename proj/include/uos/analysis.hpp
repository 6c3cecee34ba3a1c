#ifndef UOS_ANALYSIS_HPP
#define UOS_ANALYSIS_HPP

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "uos/core.hpp"
#include "uos/models.hpp"

namespace uos {

/// (alpha, beta) with provenance.  alpha and beta certify
///   alpha |v|^2 <= |phi v|^2 <= beta |v|^2
/// for all v = x1 + x2 with x1, x2 in the model, i.e. at the combined order
/// (support size 2K for K-sparse models).
struct BiLipschitzEstimate {
  double alpha = 0.0;
  double beta = 0.0;
  int order = 0;  // combined order the estimate certifies
  enum class Method { Exhaustive, MonteCarlo } method = Method::Exhaustive;
  std::int64_t count = 0;  // enumerated supports or accepted trials
  std::uint64_t seed = 0;  // Monte-Carlo provenance
};

inline const char* to_string(BiLipschitzEstimate::Method m) {
  return m == BiLipschitzEstimate::Method::Exhaustive ? "exhaustive" : "monte-carlo";
}

/// max(beta - 1, 1 - alpha): the restricted-isometry constant matching the
/// estimate when the operator is scaled so the constants straddle 1.
inline double rip_delta(const BiLipschitzEstimate& e) {
  return std::max(e.beta - 1.0, 1.0 - e.alpha);
}

namespace detail {

inline double binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (Index i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

/// Lexicographic enumeration of all k-subsets of {0..n-1}.
inline void for_each_support(Index n, Index k,
                             const std::function<void(const std::vector<Index>&)>& fn) {
  std::vector<Index> s(static_cast<std::size_t>(k));
  std::iota(s.begin(), s.end(), Index(0));
  if (k == 0) {
    fn(s);
    return;
  }
  for (;;) {
    fn(s);
    Index i = k - 1;
    while (i >= 0 && s[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++s[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j)
      s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace detail

inline constexpr double kExhaustiveSupportLimit = 1e6;
inline constexpr double kBruteForceSupportLimit = 1e5;

/// Exact bi-Lipschitz constants of a dense matrix over sums of two K-sparse
/// vectors: the extreme eigenvalues of phi_S^T phi_S over all supports of
/// size min(2K, N).
inline BiLipschitzEstimate exhaustive_bilipschitz_sparse(const MatrixXd& phi, Index k) {
  const Index n = phi.cols();
  require(k >= 1 && k <= n, "exhaustive_bilipschitz_sparse: need 1 <= K <= N");
  const Index s = std::min(Index(2) * k, n);
  const double combos = detail::binomial(n, s);
  if (combos > kExhaustiveSupportLimit)
    throw EnumerationLimitError(
        "exhaustive_bilipschitz_sparse: C(N,2K) exceeds the enumeration guard; use "
        "monte_carlo_bilipschitz instead");

  BiLipschitzEstimate est;
  est.order = static_cast<int>(s);
  est.method = BiLipschitzEstimate::Method::Exhaustive;
  est.alpha = std::numeric_limits<double>::infinity();
  est.beta = 0.0;

  MatrixXd sub(phi.rows(), s);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig;
  detail::for_each_support(n, s, [&](const std::vector<Index>& supp) {
    for (Index j = 0; j < s; ++j) sub.col(j) = phi.col(supp[static_cast<std::size_t>(j)]);
    eig.compute(MatrixXd(sub.transpose() * sub), Eigen::EigenvaluesOnly);
    est.alpha = std::min(est.alpha, eig.eigenvalues().minCoeff());
    est.beta = std::max(est.beta, eig.eigenvalues().maxCoeff());
    ++est.count;
  });
  est.alpha = std::max(est.alpha, 0.0);  // Gram eigenvalues are >= 0 up to roundoff
  return est;
}

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sampled inner bracket of the constants: extreme ratios
/// |phi(x1+x2)|^2 / |x1+x2|^2 over model-sampled pairs.  Sampling can only
/// shrink the observed range, so alpha_mc >= alpha_exact and
/// beta_mc <= beta_exact.
template <class Scalar>
BiLipschitzEstimate monte_carlo_bilipschitz(const LinearOperator<Scalar>& op,
                                            const UnionModel<Scalar>& model, int trials,
                                            std::uint64_t seed) {
  require(trials >= 1, "monte_carlo_bilipschitz: trials must be >= 1");
  if (op.cols() != model.dimension())
    throw DimensionError("monte_carlo_bilipschitz: operator/model dimension mismatch");

  std::mt19937_64 rng(seed);
  BiLipschitzEstimate est;
  est.order = 2 * static_cast<int>(model.order());
  est.method = BiLipschitzEstimate::Method::MonteCarlo;
  est.seed = seed;
  est.alpha = std::numeric_limits<double>::infinity();
  est.beta = 0.0;

  for (int t = 0; t < trials; ++t) {
    const Vector<Scalar> x1 = model.sample(rng, 1.0);
    const Vector<Scalar> x2 = model.sample(rng, 1.0);
    const Vector<Scalar> v = x1 + x2;
    const double vn2 = v.squaredNorm();
    if (vn2 <= 1e-28) continue;  // degenerate pair, skip
    const double r = op.apply(v).squaredNorm() / vn2;
    est.alpha = std::min(est.alpha, r);
    est.beta = std::max(est.beta, r);
    ++est.count;
  }
  if (est.count == 0)
    throw SamplingError("monte_carlo_bilipschitz: every sampled pair was degenerate");
  return est;
}

/// Exhaustive search for the model-constrained least-residual point over all
/// K-sparse supports: per support a least-squares fit of y on the selected
/// columns.  Supports within 1e-12 of the best residual keep the
/// lexicographically first (lowest-index) support.
inline VectorXd brute_force_opt(const VectorXd& y, const MatrixXd& phi, Index k) {
  const Index n = phi.cols();
  require(k >= 0 && k <= n, "brute_force_opt: need 0 <= K <= N");
  if (y.size() != phi.rows()) throw DimensionError("brute_force_opt: y does not match phi");
  if (detail::binomial(n, k) > kBruteForceSupportLimit)
    throw EnumerationLimitError("brute_force_opt: C(N,K) exceeds the enumeration guard");

  VectorXd best = VectorXd::Zero(n);
  if (k == 0) return best;
  double best_res = y.norm();  // empty-support residual; any fit only improves it
  bool found = false;

  MatrixXd sub(phi.rows(), k);
  detail::for_each_support(n, k, [&](const std::vector<Index>& supp) {
    for (Index j = 0; j < k; ++j) sub.col(j) = phi.col(supp[static_cast<std::size_t>(j)]);
    const VectorXd coef = sub.colPivHouseholderQr().solve(y);
    const double res = (y - sub * coef).norm();
    if (!found || res < best_res - 1e-12) {
      found = true;
      best_res = res;
      best.setZero();
      for (Index j = 0; j < k; ++j) best[supp[static_cast<std::size_t>(j)]] = coef[j];
    }
  });
  return best;
}

struct OptimalityBounds {
  double upper = 0.0;             // (2/sqrt(alpha)) |e_A| + |x - x_A|
  double worst_case_lower = 0.0;  // sqrt(0.5/beta) |e_A| + |x - x_A|
};

/// Error bounds for the optimal model-constrained solution.  The upper bound
/// holds for every instance; the lower bound is attained by an adversarial
/// noise choice, so it bounds the worst case only.
inline OptimalityBounds optimality_bounds(double alpha, double beta, double eA_norm,
                                          double mismatch_norm) {
  if (!(alpha > 0.0))
    throw ParameterError("optimality_bounds: alpha must be > 0 (operator not bi-Lipschitz)");
  require(beta >= alpha, "optimality_bounds: beta must be >= alpha");
  require(eA_norm >= 0.0 && mismatch_norm >= 0.0, "optimality_bounds: norms must be >= 0");
  return {2.0 / std::sqrt(alpha) * eA_norm + mismatch_norm,
          std::sqrt(0.5 / beta) * eA_norm + mismatch_norm};
}

/// Measurements sufficient for a union of L subspaces of dimension K:
/// ceil((2/(c delta)) (ln(2L) + 2K ln(12/delta) + t)); c = 7/18 for
/// i.i.d. normal entries.
inline long sample_complexity_finite_union(long num_subspaces, long subspace_dim, double delta,
                                           double t, double c = 7.0 / 18.0) {
  require(num_subspaces >= 1, "sample_complexity_finite_union: L >= 1");
  require(subspace_dim >= 1, "sample_complexity_finite_union: K >= 1");
  require(delta > 0.0 && delta < 1.0, "sample_complexity_finite_union: delta in (0,1)");
  require(t > 0.0, "sample_complexity_finite_union: t > 0");
  require(c > 0.0, "sample_complexity_finite_union: c > 0");
  const double v = 2.0 / (c * delta) *
                   (std::log(2.0 * static_cast<double>(num_subspaces)) +
                    2.0 * static_cast<double>(subspace_dim) * std::log(12.0 / delta) + t);
  return static_cast<long>(std::ceil(v));
}

/// Measurements sufficient for rank-K recovery of m x n matrices:
/// ceil(c0 K (m+n) ln(mn)).  Natural logarithm.
inline long sample_complexity_lowrank(long rank, long m, long n, double c0) {
  require(rank >= 0, "sample_complexity_lowrank: K >= 0");
  require(m >= 1 && n >= 1, "sample_complexity_lowrank: m, n >= 1");
  require(c0 > 0.0, "sample_complexity_lowrank: c0 > 0");
  const double v = c0 * static_cast<double>(rank) * static_cast<double>(m + n) *
                   std::log(static_cast<double>(m) * static_cast<double>(n));
  return static_cast<long>(std::ceil(v));
}

/// Embedding bandwidth sufficient for support measure |S| inside [0, B_N]:
/// c |S| ln(B_N / |S|).
inline double sample_complexity_multiband(double support_measure, double total_bandwidth,
                                          double c) {
  require(support_measure > 0.0 && support_measure < total_bandwidth,
          "sample_complexity_multiband: need 0 < |S| < B_N");
  require(c >= 0.0, "sample_complexity_multiband: c >= 0");
  return c * support_measure * std::log(total_bandwidth / support_measure);
}

}  // namespace uos

#endif  // UOS_ANALYSIS_HPP
