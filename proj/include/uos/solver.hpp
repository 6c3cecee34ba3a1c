#ifndef UOS_SOLVER_HPP
#define UOS_SOLVER_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "uos/core.hpp"
#include "uos/models.hpp"

namespace uos {

struct IPAConfig {
  /// Step size; empty means the default 0.99 / operator_norm_sq(phi), which
  /// keeps 1/mu above the global Lipschitz bound and guarantees descent.
  std::optional<double> mu;
  int max_iters = 1000;
  double residual_tol = 0.0;
  /// When set, run exactly this many iterations (n* mode) and ignore the
  /// tolerance stopping rule.
  std::optional<int> fixed_iterations;
  bool record_history = true;
  /// Optional precomputed operator_norm_sq value; avoids the internal power
  /// iteration when the caller already has one.
  std::optional<double> op_norm_sq_hint;
};

enum class StopReason { FixedCount, Tolerance, MaxIters };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::FixedCount: return "fixed-count";
    case StopReason::Tolerance: return "tolerance";
    case StopReason::MaxIters: return "max-iters";
  }
  return "?";
}

template <class Scalar>
struct IPAResult {
  Vector<Scalar> estimate;
  int iterations = 0;
  std::vector<double> residual_history;  // iterations + 1 entries when recorded
  StopReason stop_reason = StopReason::MaxIters;
  /// Set when some step increased the residual although mu <= 1/|phi|^2
  /// held; under that condition the residual is provably non-increasing, so
  /// an increase diagnoses a projection or operator contract breach.
  bool residual_increased = false;
  double mu = 0.0;           // step size actually used
  double op_norm_sq = 0.0;   // bound used for the default step / guard
};

/// One recursion step: P_A(x + mu * phi^*(y - phi x)).
template <class Scalar>
Vector<Scalar> ipa_step(const Vector<Scalar>& x, const Vector<Scalar>& y,
                        const LinearOperator<Scalar>& op, const UnionModel<Scalar>& model,
                        double mu) {
  require(mu > 0.0, "ipa_step: mu must be > 0");
  if (x.size() != op.cols()) throw DimensionError("ipa_step: x does not match operator input");
  if (y.size() != op.rows()) throw DimensionError("ipa_step: y does not match operator output");
  Vector<Scalar> g = op.apply_adjoint(Vector<Scalar>(y - op.apply(x)));
  return model.project(Vector<Scalar>(x + Scalar(mu) * g));
}

/// Run the iterative projection recursion from x0 (default 0).
///
/// Stopping: fixed_iterations when set; otherwise iterate until
/// |y - phi x| <= residual_tol or max_iters is reached.  The residual at x0
/// is checked before the first step, so exact data costs zero iterations.
template <class Scalar>
IPAResult<Scalar> ipa_run(const Vector<Scalar>& y, const LinearOperator<Scalar>& op,
                          const UnionModel<Scalar>& model, const IPAConfig& cfg,
                          std::optional<Vector<Scalar>> x0 = std::nullopt) {
  if (y.size() != op.rows()) throw DimensionError("ipa_run: y does not match operator output");
  if (op.cols() != model.dimension())
    throw DimensionError("ipa_run: operator input does not match model dimension");
  require(cfg.max_iters >= 0, "ipa_run: max_iters must be >= 0");
  require(cfg.residual_tol >= 0.0, "ipa_run: residual_tol must be >= 0");
  if (cfg.fixed_iterations) {
    require(*cfg.fixed_iterations >= 0, "ipa_run: fixed_iterations must be >= 0");
    require(*cfg.fixed_iterations < std::numeric_limits<int>::max(),
            "ipa_run: fixed_iterations sentinel passed; use tolerance mode for noiseless data");
  }

  IPAResult<Scalar> res;
  res.op_norm_sq = cfg.op_norm_sq_hint ? *cfg.op_norm_sq_hint : operator_norm_sq(op).value;
  if (cfg.mu) {
    res.mu = *cfg.mu;
    require(res.mu > 0.0, "ipa_run: mu must be > 0");
  } else {
    require(res.op_norm_sq > 0.0, "ipa_run: cannot derive a step size for a null operator");
    res.mu = 0.99 / res.op_norm_sq;
  }
  const bool descent_guard = res.op_norm_sq > 0.0 && res.mu <= 1.0 / res.op_norm_sq;

  Vector<Scalar> x = x0 ? *x0 : Vector<Scalar>::Zero(op.cols());
  if (x.size() != op.cols()) throw DimensionError("ipa_run: x0 does not match operator input");

  Vector<Scalar> r = y - op.apply(x);
  double rn = r.norm();
  if (cfg.record_history) res.residual_history.push_back(rn);

  const bool fixed = cfg.fixed_iterations.has_value();
  const int budget = fixed ? *cfg.fixed_iterations : cfg.max_iters;
  res.stop_reason = fixed ? StopReason::FixedCount : StopReason::MaxIters;

  for (int n = 0; n < budget; ++n) {
    if (!fixed && rn <= cfg.residual_tol) {
      res.stop_reason = StopReason::Tolerance;
      break;
    }
    Vector<Scalar> g = op.apply_adjoint(r);
    x = model.project(Vector<Scalar>(x + Scalar(res.mu) * g));
    r = y - op.apply(x);
    const double next = r.norm();
    if (descent_guard && next > rn + 1e-10) res.residual_increased = true;
    rn = next;
    res.iterations = n + 1;
    if (cfg.record_history) res.residual_history.push_back(rn);
  }
  if (!fixed && rn <= cfg.residual_tol) res.stop_reason = StopReason::Tolerance;

  res.estimate = std::move(x);
  return res;
}

/// Sentinel returned when the effective noise is zero: the logarithm in the
/// iteration-count formula is undefined and the caller should iterate to
/// tolerance instead.
inline constexpr int kNStarNoiseless = std::numeric_limits<int>::max();

/// Iterations after which the error bound is guaranteed:
/// ceil(2 ln(delta |e_A| / |x_A|) / ln(2/(mu alpha) - 2)), never negative.
inline int compute_n_star(double delta, double eA_norm, double xA_norm, double mu, double alpha) {
  require(delta > 0.0, "compute_n_star: delta must be > 0");
  require(eA_norm >= 0.0, "compute_n_star: |e_A| must be >= 0");
  require(xA_norm > 0.0, "compute_n_star: |x_A| must be > 0");
  require(mu > 0.0 && alpha > 0.0, "compute_n_star: mu, alpha must be > 0");
  const double ma = mu * alpha;
  if (!(ma > 2.0 / 3.0 && ma < 1.0))
    throw ParameterError(
        "compute_n_star: mu*alpha must lie in (2/3, 1); this is the step-size window "
        "beta <= 1/mu < 1.5*alpha");
  if (eA_norm == 0.0) return kNStarNoiseless;
  const double ratio = delta * eA_norm / xA_norm;
  if (ratio >= 1.0) return 0;
  const double q = 2.0 / ma - 2.0;
  if (q <= 0.0) return 1;  // mu*alpha rounded to 1; one step contracts fully
  const double n = 2.0 * std::log(ratio) / std::log(q);
  if (n >= static_cast<double>(std::numeric_limits<int>::max()))
    return std::numeric_limits<int>::max();
  return std::max(0, static_cast<int>(std::ceil(n)));
}

/// Guaranteed error after n* iterations:
/// (sqrt(4/(3 alpha - 2/mu)) + delta) |e_A| + |x - x_A|.
inline double theorem2_error_bound(double alpha, double mu, double delta, double eA_norm,
                                   double mismatch_norm) {
  require(alpha > 0.0 && mu > 0.0, "theorem2_error_bound: alpha, mu must be > 0");
  require(delta >= 0.0 && eA_norm >= 0.0 && mismatch_norm >= 0.0,
          "theorem2_error_bound: norms must be >= 0");
  const double denom = 3.0 * alpha - 2.0 / mu;
  if (denom <= 0.0)
    throw ParameterError(
        "theorem2_error_bound: requires 1/mu < 1.5*alpha (step-size window not satisfied)");
  return (std::sqrt(4.0 / denom) + delta) * eA_norm + mismatch_norm;
}

/// Both sides of the descent surrogate inequality: for x_next produced by
/// one step from x_n and any reference point in the model,
///   |y - phi x_next|^2 - |y - phi x_n|^2
///     <= -<x_ref - x_n, g> + (1/mu) |x_ref - x_n|^2,  g = 2 phi^*(y - phi x_n),
/// whenever 1/mu is at least the bi-Lipschitz upper constant.
template <class Scalar>
std::pair<double, double> lemma1_surrogate_check(const Vector<Scalar>& x_n,
                                                 const Vector<Scalar>& x_next,
                                                 const Vector<Scalar>& x_ref,
                                                 const Vector<Scalar>& y,
                                                 const LinearOperator<Scalar>& op, double mu) {
  require(mu > 0.0, "lemma1_surrogate_check: mu must be > 0");
  const Vector<Scalar> r_n = y - op.apply(x_n);
  const Vector<Scalar> r_next = y - op.apply(x_next);
  const double lhs = r_next.squaredNorm() - r_n.squaredNorm();
  const Vector<Scalar> g = Scalar(2) * op.apply_adjoint(r_n);
  const Vector<Scalar> d = x_ref - x_n;
  const double rhs = -real_inner<Scalar>(d, g) + d.squaredNorm() / mu;
  return {lhs, rhs};
}

}  // namespace uos

#endif  // UOS_SOLVER_HPP
