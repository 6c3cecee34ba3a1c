#ifndef UOS_EXPERIMENTS_HPP
#define UOS_EXPERIMENTS_HPP

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "uos/analysis.hpp"
#include "uos/config.hpp"
#include "uos/core.hpp"
#include "uos/io.hpp"
#include "uos/models.hpp"
#include "uos/operators.hpp"
#include "uos/solver.hpp"
#include "uos/table.hpp"
#include "uos/version.hpp"

namespace uos {

struct RunOutcome {
  ResultTable table;
  int violations = 0;  // bound violations among accepted trials (bounds-check)
};

namespace detail {

/// Deterministic per-trial stream derived from the single top-level seed.
inline std::uint64_t derive_seed(std::uint64_t top, std::uint64_t stream, std::uint64_t trial) {
  std::uint64_t z = top + 0x9e3779b97f4a7c15ULL * (stream + 1) + 0xbf58476d1ce4e5b9ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Run fn(i) for i in [0, n); executes concurrently, results land by index.
inline void parallel_for(long n, const std::function<void(long)>& fn) {
  if (n <= 0) return;
  const long hw = static_cast<long>(std::thread::hardware_concurrency());
  const long workers = std::max(1L, std::min({hw, n, 16L}));
  if (workers == 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (long w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (long i = w; i < n; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

inline void add_common_meta(ResultTable& table, const std::string& command, const Config& cfg) {
  table.add_meta("command", command);
  table.add_meta("config_hash", cfg.hash_hex());
  table.add_meta("seed", std::to_string(cfg.get_uint64_or("seed", 0)));
  table.add_meta("version", kVersion);
}

}  // namespace detail

inline std::unique_ptr<UnionModel<double>> build_model(const Config& cfg) {
  const std::string kind = cfg.get_string("model.kind");
  if (kind == "k-sparse")
    return std::make_unique<KSparseModel<double>>(cfg.get_int("model.n"), cfg.get_int("model.k"));
  if (kind == "block-sparse")
    return std::make_unique<BlockSparseModel<double>>(BlockSparseModel<double>::uniform(
        cfg.get_int("model.n"), cfg.get_int("model.block_size"), cfg.get_int("model.k")));
  if (kind == "low-rank")
    return std::make_unique<LowRankModel<double>>(cfg.get_int("model.rows"),
                                                  cfg.get_int("model.cols"),
                                                  cfg.get_int("model.rank"));
  if (kind == "multiband")
    return std::make_unique<MultibandModel<double>>(
        cfg.get_int("model.bands"), cfg.get_int_or("model.grid", 16), cfg.get_int("model.k"));
  throw ConfigError("model.kind: unknown model '" + kind + "'");
}

inline std::unique_ptr<LinearOperator<double>> build_operator(const Config& cfg, Index n,
                                                              std::uint64_t seed) {
  const std::string kind = cfg.get_string_or("operator.kind", "gaussian");
  if (kind == "identity") return std::make_unique<ScaledIdentityOperator<double>>(n, 1.0);
  if (kind == "file")
    return std::make_unique<DenseOperator<double>>(
        load_matrix_text_file(cfg.get_string("operator.path")));
  EnsembleSpec spec;
  spec.m = cfg.get_int("operator.m");
  spec.n = n;
  spec.scale = cfg.get_double_or("operator.scale", 0.0);
  spec.seed = seed;
  if (kind == "gaussian")
    spec.kind = EnsembleSpec::Kind::Gaussian;
  else if (kind == "rademacher")
    spec.kind = EnsembleSpec::Kind::Rademacher;
  else
    throw ConfigError("operator.kind: unknown operator '" + kind + "'");
  return std::make_unique<DenseOperator<double>>(ensemble_matrix(spec));
}

/// Resolve the solver step size for one instance.
///   solver.mu = auto     -> 0.99 / operator_norm_sq   (default; guaranteed descent)
///   solver.mu = norm     -> 1 / operator_norm_sq
///   solver.mu = mc-beta  -> 1 / beta_mc at combined order (restricted step)
///   solver.mu = <number> -> as given
template <class Scalar>
double resolve_mu(const Config& cfg, const LinearOperator<Scalar>& op,
                  const UnionModel<Scalar>& model, double op_norm_sq_value,
                  std::uint64_t trial_seed) {
  const std::string mu = cfg.get_string_or("solver.mu", "auto");
  if (mu == "auto") return 0.99 / op_norm_sq_value;
  if (mu == "norm") return 1.0 / op_norm_sq_value;
  if (mu == "mc-beta") {
    const int trials = static_cast<int>(cfg.get_int_or("solver.mu_mc_trials", 300));
    const auto est = monte_carlo_bilipschitz(op, model, trials,
                                             detail::derive_seed(trial_seed, 77, 0));
    return 1.0 / est.beta;
  }
  try {
    return cfg.get_double("solver.mu");
  } catch (const ConfigError&) {
    throw ConfigError("solver.mu: expected auto, norm, mc-beta or a number, got '" + mu + "'");
  }
}

inline IPAConfig solver_config(const Config& cfg) {
  IPAConfig ipa;
  ipa.max_iters = static_cast<int>(cfg.get_int_or("solver.max_iters", 500));
  ipa.residual_tol = cfg.get_double_or("solver.residual_tol", 1e-12);
  if (cfg.has("solver.fixed_iterations"))
    ipa.fixed_iterations = static_cast<int>(cfg.get_int("solver.fixed_iterations"));
  ipa.record_history = cfg.get_bool_or("solver.record_history", false);
  return ipa;
}

/// recover: seeded recovery trials for one (model, operator) configuration.
inline RunOutcome run_recover(const Config& cfg) {
  const auto model = build_model(cfg);
  const long trials = cfg.get_int_or("trials", 100);
  require(trials >= 0, "recover: trials must be >= 0");
  const std::uint64_t seed = cfg.get_uint64_or("seed", 0);
  const double noise_norm = cfg.get_double_or("noise.norm", 0.0);
  const double success_tol = cfg.get_double_or("success.rel_tol", 1e-4);

  ResultTable table({"trial", "seed", "rel_error", "iterations", "final_residual",
                     "stop_reason", "success"});
  detail::add_common_meta(table, "recover", cfg);
  table.add_meta("model", model->describe());

  std::vector<ResultTable::Row> rows(static_cast<std::size_t>(trials), table.make_row());
  std::vector<int> successes(static_cast<std::size_t>(trials), 0);

  detail::parallel_for(trials, [&](long t) {
    const std::uint64_t tseed = detail::derive_seed(seed, 1, static_cast<std::uint64_t>(t));
    const auto op = build_operator(cfg, model->dimension(), tseed);
    std::mt19937_64 rng(detail::derive_seed(seed, 2, static_cast<std::uint64_t>(t)));
    const VectorXd x = model->sample(rng, 1.0);
    VectorXd y = op->apply(x);
    if (noise_norm > 0.0) {
      VectorXd e = random_normal_vector<double>(op->rows(), rng);
      y += e * (noise_norm / e.norm());
    }
    IPAConfig ipa = solver_config(cfg);
    ipa.op_norm_sq_hint = operator_norm_sq(*op).value;
    ipa.mu = resolve_mu(cfg, *op, *model, *ipa.op_norm_sq_hint, tseed);
    const auto res = ipa_run(y, *op, *model, ipa);
    const double rel = (x - res.estimate).norm() / x.norm();
    const bool ok = rel <= success_tol;
    successes[static_cast<std::size_t>(t)] = ok;
    auto row = table.make_row();
    row.add(t)
        .add(std::to_string(tseed))
        .add(rel)
        .add(res.iterations)
        .add(residual(*op, res.estimate, y).norm)
        .add(to_string(res.stop_reason))
        .add(ok);
    rows[static_cast<std::size_t>(t)] = std::move(row);
  });

  long ok_count = 0;
  for (long t = 0; t < trials; ++t) {
    ok_count += successes[static_cast<std::size_t>(t)];
    table.add_row(std::move(rows[static_cast<std::size_t>(t)]));
  }
  table.add_meta("success_rate",
                 format_number(trials > 0 ? static_cast<double>(ok_count) /
                                                static_cast<double>(trials)
                                          : 0.0));
  return {std::move(table), 0};
}

/// rip-scan: bi-Lipschitz constant estimates over a grid of measurement
/// counts, with full provenance per row.
inline RunOutcome run_rip_scan(const Config& cfg) {
  const Index n = cfg.get_int("model.n");
  const Index k = cfg.get_int("model.k");
  const auto m_list = cfg.get_int_list("rip.m_list");
  const long matrices = cfg.get_int_or("rip.matrices", 20);
  const int trials = static_cast<int>(cfg.get_int_or("rip.trials", 2000));
  const std::string method = cfg.get_string_or("rip.method", "mc");
  const std::uint64_t seed = cfg.get_uint64_or("seed", 0);
  require(matrices >= 1, "rip-scan: rip.matrices must be >= 1");
  if (method != "mc" && method != "exhaustive" && method != "both")
    throw ConfigError("rip.method: expected mc, exhaustive or both");

  ResultTable table(
      {"m", "matrix", "method", "order", "count", "seed", "alpha", "beta", "delta"});
  detail::add_common_meta(table, "rip-scan", cfg);

  const long cells = static_cast<long>(m_list.size()) * matrices;
  std::vector<std::vector<ResultTable::Row>> rows(static_cast<std::size_t>(cells));

  detail::parallel_for(cells, [&](long c) {
    const long mi = c / matrices;
    const long rep = c % matrices;
    const Index m = m_list[static_cast<std::size_t>(mi)];
    const std::uint64_t mseed =
        detail::derive_seed(seed, 10 + static_cast<std::uint64_t>(mi), static_cast<std::uint64_t>(rep));
    const auto op = make_gaussian(m, n, mseed);
    const KSparseModel<double> model(n, k);
    auto emit = [&](const BiLipschitzEstimate& est) {
      auto row = table.make_row();
      row.add(static_cast<long>(m))
          .add(rep)
          .add(to_string(est.method))
          .add(est.order)
          .add(static_cast<long>(est.count))
          .add(std::to_string(est.seed))
          .add(est.alpha)
          .add(est.beta)
          .add(rip_delta(est));
      rows[static_cast<std::size_t>(c)].push_back(std::move(row));
    };
    if (method == "mc" || method == "both")
      emit(monte_carlo_bilipschitz(*static_cast<const LinearOperator<double>*>(&op), model,
                                   trials, detail::derive_seed(mseed, 11, 0)));
    if (method == "exhaustive" || method == "both")
      emit(exhaustive_bilipschitz_sparse(op.matrix(), k));
  });

  for (auto& cell : rows)
    for (auto& r : cell) table.add_row(std::move(r));
  return {std::move(table), 0};
}

/// bounds-check: per-trial verification data for the iteration-count bound
/// and the optimal-solution upper bound, using exhaustive constants.
inline RunOutcome run_bounds_check(const Config& cfg) {
  const Index n = cfg.get_int("model.n");
  const Index k = cfg.get_int("model.k");
  const long trials = cfg.get_int_or("trials", 200);
  const std::uint64_t seed = cfg.get_uint64_or("seed", 0);
  const double delta = cfg.get_double_or("bounds.delta", 0.1);
  const double mu_safety = cfg.get_double_or("bounds.mu_safety", 0.999);
  const double noise_norm = cfg.get_double_or("noise.norm", 0.05);
  const double perturb_norm = cfg.get_double_or("perturb.norm", 0.02);
  const std::string op_family = cfg.get_string_or("bounds.operator", "mixed");
  require(mu_safety > 0.0 && mu_safety < 1.0, "bounds.mu_safety must be in (0,1)");

  ResultTable table({"trial", "alpha", "beta", "mu", "window_ok", "n_star", "err_nstar",
                     "theorem2_bound", "bound_ok", "err_opt", "upper_bound", "upper_ok"});
  detail::add_common_meta(table, "bounds-check", cfg);

  std::vector<ResultTable::Row> rows(static_cast<std::size_t>(trials), table.make_row());
  std::vector<int> flags(static_cast<std::size_t>(trials), 0);  // 1 accepted, 2 violated

  detail::parallel_for(trials, [&](long t) {
    std::mt19937_64 rng(detail::derive_seed(seed, 20, static_cast<std::uint64_t>(t)));
    const KSparseModel<double> model(n, k);

    // Instance family: orthonormal columns, a perturbed orthonormal matrix,
    // or a plain Gaussian draw.  Orthonormal instances always admit the
    // step-size window; Gaussian ones often do not and are counted.
    MatrixXd phi;
    const int fam = op_family == "mixed" ? static_cast<int>(t % 3)
                    : op_family == "orthonormal" ? 0
                    : op_family == "perturbed" ? 1 : 2;
    {
      MatrixXd g(n, n);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) g(i, j) = draw_standard_normal<double>(rng);
      if (fam == 0) {
        phi = Eigen::HouseholderQR<MatrixXd>(g).householderQ();
      } else if (fam == 1) {
        MatrixXd q = Eigen::HouseholderQR<MatrixXd>(g).householderQ();
        for (Index i = 0; i < n; ++i)
          for (Index j = 0; j < n; ++j) q(i, j) += 0.03 * draw_standard_normal<double>(rng);
        phi = q;
      } else {
        const Index m = std::max<Index>(1, (7 * n) / 8);
        phi.resize(m, n);
        const double s = ensemble_default_scale(m);
        for (Index i = 0; i < m; ++i)
          for (Index j = 0; j < n; ++j) phi(i, j) = s * draw_standard_normal<double>(rng);
      }
    }
    const DenseOperator<double> op(phi);

    const auto est = exhaustive_bilipschitz_sparse(phi, k);
    const double mu = mu_safety / est.beta;
    // window margin keeps n_star finite: reject mu*alpha too close to 2/3
    const bool window_ok = est.alpha > 0.0 && est.beta <= 1.0 / mu &&
                           1.0 / mu < 1.5 * est.alpha && mu * est.alpha > 2.0 / 3.0 + 1e-9 &&
                           mu * est.alpha < 1.0;

    VectorXd x = model.sample(rng, 1.0);
    if (perturb_norm > 0.0) {
      VectorXd p = random_normal_vector<double>(n, rng);
      x += p * (perturb_norm / p.norm());
    }
    VectorXd y = op.apply(x);
    if (noise_norm > 0.0) {
      VectorXd e = random_normal_vector<double>(op.rows(), rng);
      y += e * (noise_norm / e.norm());
    }
    const VectorXd xA = model.project(x);
    const double eA = (y - op.apply(xA)).norm();
    const double mismatch = (x - xA).norm();

    auto row = table.make_row();
    row.add(t).add(est.alpha).add(est.beta).add(mu).add(window_ok);

    if (!window_ok || xA.norm() == 0.0 || eA == 0.0) {
      row.add("").add("").add("").add("").add("").add("").add("");
      rows[static_cast<std::size_t>(t)] = std::move(row);
      return;
    }

    const int n_star = compute_n_star(delta, eA, xA.norm(), mu, est.alpha);
    IPAConfig ipa;
    ipa.mu = mu;
    ipa.fixed_iterations = n_star;
    ipa.record_history = false;
    ipa.op_norm_sq_hint = est.beta;  // any bound works; only diagnostics use it
    const auto res = ipa_run(y, op, model, ipa);
    const double err = (x - res.estimate).norm();
    const double bound = theorem2_error_bound(est.alpha, mu, delta, eA, mismatch);
    const bool bound_ok = err <= bound + 1e-10;

    const VectorXd x_opt = brute_force_opt(y, phi, k);
    const double err_opt = (x - x_opt).norm();
    const double upper = optimality_bounds(est.alpha, est.beta, eA, mismatch).upper;
    const bool upper_ok = err_opt <= upper + 1e-10;

    row.add(n_star).add(err).add(bound).add(bound_ok).add(err_opt).add(upper).add(upper_ok);
    rows[static_cast<std::size_t>(t)] = std::move(row);
    flags[static_cast<std::size_t>(t)] = (bound_ok && upper_ok) ? 1 : 2;
  });

  int accepted = 0, violations = 0;
  for (long t = 0; t < trials; ++t) {
    accepted += flags[static_cast<std::size_t>(t)] != 0;
    violations += flags[static_cast<std::size_t>(t)] == 2;
    table.add_row(std::move(rows[static_cast<std::size_t>(t)]));
  }
  table.add_meta("accepted_trials", std::to_string(accepted));
  table.add_meta("violations", std::to_string(violations));
  return {std::move(table), violations};
}

/// phase-transition: empirical success rate over an (M, K) grid.
inline RunOutcome run_phase_transition(const Config& cfg) {
  const Index n = cfg.get_int("model.n");
  const auto m_list = cfg.get_int_list("phase.m_list");
  const auto k_list = cfg.get_int_list("phase.k_list");
  const long trials = cfg.get_int_or("trials", 20);
  const std::uint64_t seed = cfg.get_uint64_or("seed", 0);
  const double success_tol = cfg.get_double_or("success.rel_tol", 1e-4);

  const long cells = static_cast<long>(m_list.size()) * static_cast<long>(k_list.size());
  if (cells > 4096 || cells * trials > 500000)
    throw ConfigError("phase-transition: grid too large (cells*" + std::to_string(trials) + ")");

  ResultTable table({"m", "k", "trials", "successes", "success_rate"});
  detail::add_common_meta(table, "phase-transition", cfg);

  std::vector<long> successes(static_cast<std::size_t>(cells), 0);
  detail::parallel_for(cells, [&](long c) {
    const Index m = m_list[static_cast<std::size_t>(c) / k_list.size()];
    const Index k = k_list[static_cast<std::size_t>(c) % k_list.size()];
    if (k > n || m < 1) return;
    const KSparseModel<double> model(n, k);
    long ok = 0;
    for (long t = 0; t < trials; ++t) {
      const std::uint64_t tseed =
          detail::derive_seed(seed, 30 + static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(t));
      if (k == 0) {
        ++ok;  // zero model: the zero vector is always recovered
        continue;
      }
      const auto op = make_gaussian(m, n, tseed);
      std::mt19937_64 rng(detail::derive_seed(tseed, 31, 0));
      const VectorXd x = model.sample(rng, 1.0);
      const VectorXd y = op.apply(x);
      IPAConfig ipa = solver_config(cfg);
      ipa.op_norm_sq_hint = operator_norm_sq(op).value;
      ipa.mu = resolve_mu(cfg, op, model, *ipa.op_norm_sq_hint, tseed);
      const auto res = ipa_run(y, op, model, ipa);
      ok += (x - res.estimate).norm() / x.norm() <= success_tol;
    }
    successes[static_cast<std::size_t>(c)] = ok;
  });

  for (long c = 0; c < cells; ++c) {
    const long m = m_list[static_cast<std::size_t>(c) / k_list.size()];
    const long k = k_list[static_cast<std::size_t>(c) % k_list.size()];
    auto row = table.make_row();
    row.add(m).add(k).add(trials).add(successes[static_cast<std::size_t>(c)]);
    row.add(trials > 0 ? static_cast<double>(successes[static_cast<std::size_t>(c)]) /
                             static_cast<double>(trials)
                       : 0.0);
    table.add_row(std::move(row));
  }
  return {std::move(table), 0};
}

/// lowrank-demo: rank-constrained recovery from Gaussian measurements of the
/// vectorized matrix.
inline RunOutcome run_lowrank_demo(const Config& cfg) {
  const Index m = cfg.get_int("model.rows");
  const Index nn = cfg.get_int("model.cols");
  const Index r = cfg.get_int("model.rank");
  const Index meas = cfg.get_int("operator.m");
  const long trials = cfg.get_int_or("trials", 100);
  const std::uint64_t seed = cfg.get_uint64_or("seed", 0);
  const double success_tol = cfg.get_double_or("success.rel_tol", 1e-4);

  ResultTable table({"trial", "seed", "rel_error", "iterations", "final_residual",
                     "stop_reason", "success"});
  detail::add_common_meta(table, "lowrank-demo", cfg);

  const LowRankModel<double> model(m, nn, r);
  std::vector<ResultTable::Row> rows(static_cast<std::size_t>(trials), table.make_row());
  std::vector<int> successes(static_cast<std::size_t>(trials), 0);

  detail::parallel_for(trials, [&](long t) {
    const std::uint64_t tseed = detail::derive_seed(seed, 40, static_cast<std::uint64_t>(t));
    const auto op = make_matrix_sensing(m, nn, meas, tseed);
    std::mt19937_64 rng(detail::derive_seed(seed, 41, static_cast<std::uint64_t>(t)));
    const VectorXd x = model.sample(rng, 1.0);
    const VectorXd y = op.apply(x);
    IPAConfig ipa = solver_config(cfg);
    ipa.op_norm_sq_hint = operator_norm_sq(op).value;
    ipa.mu = resolve_mu(cfg, op, model, *ipa.op_norm_sq_hint, tseed);
    const auto res = ipa_run(y, op, model, ipa);
    const double rel = (x - res.estimate).norm() / x.norm();
    const bool ok = rel <= success_tol;
    successes[static_cast<std::size_t>(t)] = ok;
    auto row = table.make_row();
    row.add(t)
        .add(std::to_string(tseed))
        .add(rel)
        .add(res.iterations)
        .add(residual(op, res.estimate, y).norm)
        .add(to_string(res.stop_reason))
        .add(ok);
    rows[static_cast<std::size_t>(t)] = std::move(row);
  });

  long ok_count = 0;
  for (long t = 0; t < trials; ++t) {
    ok_count += successes[static_cast<std::size_t>(t)];
    table.add_row(std::move(rows[static_cast<std::size_t>(t)]));
  }
  table.add_meta("success_rate",
                 format_number(trials > 0 ? static_cast<double>(ok_count) /
                                                static_cast<double>(trials)
                                          : 0.0));
  return {std::move(table), 0};
}

/// multiband-demo: spectral mixing of complex frequency blocks at a
/// sub-Nyquist block ratio M/N, with the stacking-identity residual and the
/// recovery error per trial.
inline RunOutcome run_multiband_demo(const Config& cfg) {
  using C = std::complex<double>;
  const Index bands = cfg.get_int("model.bands");
  const Index grid = cfg.get_int_or("model.grid", 16);
  const Index k = cfg.get_int("model.k");
  const Index m = cfg.get_int("mixing.m");
  const long trials = cfg.get_int_or("trials", 100);
  const std::uint64_t seed = cfg.get_uint64_or("seed", 0);
  const double success_tol = cfg.get_double_or("success.rel_tol", 1e-4);
  const std::string mixing_kind = cfg.get_string_or("mixing.kind", "gaussian");
  const double mixing_scale = cfg.get_double_or("mixing.scale", 0.0);
  const bool expected_failure = k > m;  // fewer output blocks than active bands

  ResultTable table({"trial", "seed", "stacking_rel_residual", "rel_error", "iterations",
                     "sub_nyquist_ratio", "regime", "success"});
  detail::add_common_meta(table, "multiband-demo", cfg);

  const MultibandModel<C> model(bands, grid, k);
  std::vector<ResultTable::Row> rows(static_cast<std::size_t>(trials), table.make_row());
  std::vector<int> successes(static_cast<std::size_t>(trials), 0);

  detail::parallel_for(trials, [&](long t) {
    const std::uint64_t tseed = detail::derive_seed(seed, 50, static_cast<std::uint64_t>(t));
    MatrixXd mixing;
    if (mixing_kind == "identity") {
      require(m == bands, "multiband-demo: identity mixing needs mixing.m == model.bands");
      mixing = MatrixXd::Identity(m, bands);
    } else if (mixing_kind == "gaussian" || mixing_kind == "rademacher") {
      EnsembleSpec spec;
      spec.kind = mixing_kind == "gaussian" ? EnsembleSpec::Kind::Gaussian
                                            : EnsembleSpec::Kind::Rademacher;
      spec.m = m;
      spec.n = bands;
      spec.scale = mixing_scale;
      spec.seed = tseed;
      mixing = ensemble_matrix(spec);
    } else {
      throw ConfigError("mixing.kind: expected gaussian, rademacher or identity");
    }
    const SpectralMixingOperator<C> op(mixing, grid);

    std::mt19937_64 rng(detail::derive_seed(seed, 51, static_cast<std::uint64_t>(t)));
    const Vector<C> x = model.sample(rng, 1.0);
    const Vector<C> y = op.apply(x);

    // stacking identity on an independent second sample
    const Vector<C> x2 = model.sample(rng, 1.0);
    const auto [lhs, rhs] =
        stacking_norm_identity_check(op, model.to_blocks(x), model.to_blocks(x2));
    const double denom = std::max(rhs, 1e-300);
    const double stack_rel = std::abs(lhs - rhs) / denom;

    IPAConfig ipa = solver_config(cfg);
    ipa.op_norm_sq_hint = operator_norm_sq(op).value;
    ipa.mu = resolve_mu(cfg, op, model, *ipa.op_norm_sq_hint, tseed);
    const auto res = ipa_run(y, op, model, ipa);
    const double rel = (x - res.estimate).norm() / x.norm();
    const bool ok = rel <= success_tol;
    successes[static_cast<std::size_t>(t)] = ok;

    auto row = table.make_row();
    row.add(t)
        .add(std::to_string(tseed))
        .add(stack_rel)
        .add(rel)
        .add(res.iterations)
        .add(static_cast<double>(m) / static_cast<double>(bands))
        .add(expected_failure ? "expected-failure" : "normal")
        .add(ok);
    rows[static_cast<std::size_t>(t)] = std::move(row);
  });

  long ok_count = 0;
  for (long t = 0; t < trials; ++t) {
    ok_count += successes[static_cast<std::size_t>(t)];
    table.add_row(std::move(rows[static_cast<std::size_t>(t)]));
  }
  table.add_meta("success_rate",
                 format_number(trials > 0 ? static_cast<double>(ok_count) /
                                                static_cast<double>(trials)
                                          : 0.0));
  return {std::move(table), 0};
}

inline RunOutcome run_experiment(const std::string& command, const Config& cfg) {
  if (cfg.has("command") && cfg.get_string("command") != command)
    throw ConfigError("config command '" + cfg.get_string("command") +
                      "' does not match requested command '" + command + "'");
  if (command == "recover") return run_recover(cfg);
  if (command == "rip-scan") return run_rip_scan(cfg);
  if (command == "bounds-check") return run_bounds_check(cfg);
  if (command == "phase-transition") return run_phase_transition(cfg);
  if (command == "lowrank-demo") return run_lowrank_demo(cfg);
  if (command == "multiband-demo") return run_multiband_demo(cfg);
  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace uos

#endif  // UOS_EXPERIMENTS_HPP
