#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "gve/cv_lasso.hpp"
#include "gve/dense_matrix.hpp"
#include "gve/error.hpp"
#include "gve/estimators.hpp"
#include "gve/random.hpp"
#include "gve/window_selection.hpp"

namespace gve {

enum class Ensemble { gaussian, orthonormal };

struct InstanceConfig {
  std::size_t n = 100;
  std::size_t p = 1000;
  double alpha = 0.1;      // sparsity exponent, s = ceil(n^alpha)
  double beta_norm = 1.0;
  double sigma2 = 1.0;
  Ensemble ensemble = Ensemble::gaussian;
  std::uint64_t seed = 0;
};

// ceil(n^alpha) clamped to [1, p]; exact powers are not bumped by rounding.
inline std::size_t sparsity_level(std::size_t n, double alpha, std::size_t p) {
  const long double raw = std::pow(static_cast<long double>(n), static_cast<long double>(alpha));
  const long double nearest = std::round(raw);
  const long double value = std::abs(raw - nearest) <= 1e-9L * std::max(1.0L, raw) ? nearest : std::ceil(raw);
  const auto s = static_cast<std::size_t>(value);
  return std::clamp<std::size_t>(s, 1, p);
}

struct GroundTruth {
  std::vector<double> beta;
  std::vector<double> eta;
  double sigma2 = 0;
};

struct RegressionInstance {
  DenseMatrix x;
  std::vector<double> y;
  std::optional<GroundTruth> truth;
};

// Component tags for sub-seed derivation.
enum SeedTag : std::uint64_t { kDesignSeed = 1, kSignalSeed = 2, kNoiseSeed = 3, kCvSeed = 4, kTrialSeed = 5 };

/**
 * Gaussian: i.i.d. N(0, 1/n) entries (standard deviation n^{-1/2}).
 * Orthonormal: Haar-random orthogonal n x n matrix from a Gaussian matrix
 * by re-orthogonalized Gram-Schmidt (positive R diagonal).
 */
inline DenseMatrix generate_design(std::size_t n, std::size_t p, Ensemble ensemble, std::uint64_t seed) {
  detail::require(n >= 1 && p >= 1, "design dimensions must be positive");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  if (ensemble == Ensemble::gaussian) {
    const double sd = 1.0 / std::sqrt(static_cast<double>(n));
    DenseMatrix x(n, p);
    for (double& v : x.data()) v = sd * normal(rng);
    return x;
  }

  detail::require(n == p, "orthonormal ensemble requires n == p");
  std::vector<std::vector<double>> q(p, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) q[j][i] = normal(rng);
  for (std::size_t j = 0; j < p; ++j) {
    auto& col = q[j];
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        double proj = 0;
        for (std::size_t i = 0; i < n; ++i) proj += q[k][i] * col[i];
        for (std::size_t i = 0; i < n; ++i) col[i] -= proj * q[k][i];
      }
    }
    const double norm = norm2<double>(col);
    if (norm == 0.0) throw DegenerateBlock(j, 0.0);
    for (double& v : col) v /= norm;
  }
  DenseMatrix x(n, p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) x(i, j) = q[j][i];
  return x;
}

// s-sparse vector on a uniform random support with Laplace(1) values rescaled to the given norm.
inline std::vector<double> generate_signal(std::size_t p, std::size_t s, double beta_norm, std::uint64_t seed) {
  detail::require(s <= p, "sparsity must not exceed p");
  detail::require(beta_norm >= 0, "signal norm must be non-negative");
  std::vector<double> beta(p, 0.0);
  if (beta_norm == 0.0 || s == 0) return beta;
  Rng rng(seed);
  const auto support = sample_subset(rng, p, s);
  double sq = 0;
  for (std::size_t j : support) {
    double v = 0;
    while (v == 0.0) v = sample_laplace(rng);
    beta[j] = v;
    sq += v * v;
  }
  const double scale = beta_norm / std::sqrt(sq);
  for (std::size_t j : support) beta[j] *= scale;
  return beta;
}

inline void validate(const InstanceConfig& cfg) {
  detail::require(cfg.n >= 1 && cfg.p >= 1, "instance dimensions must be positive");
  detail::require(cfg.beta_norm >= 0, "signal norm must be non-negative");
  detail::require(cfg.sigma2 >= 0, "noise variance must be non-negative");
  detail::require(std::isfinite(cfg.alpha), "sparsity exponent must be finite");
  detail::require(cfg.ensemble != Ensemble::orthonormal || cfg.n == cfg.p, "orthonormal ensemble requires n == p");
}

// y = X beta + eta with eta ~ N(0, sigma2 I); design, signal and noise use independent sub-seeds.
inline RegressionInstance generate_instance(const InstanceConfig& cfg) {
  validate(cfg);
  RegressionInstance inst;
  inst.x = generate_design(cfg.n, cfg.p, cfg.ensemble, mix_seed(cfg.seed, kDesignSeed));
  GroundTruth truth;
  truth.sigma2 = cfg.sigma2;
  truth.beta = generate_signal(cfg.p, sparsity_level(cfg.n, cfg.alpha, cfg.p), cfg.beta_norm,
                               mix_seed(cfg.seed, kSignalSeed));
  Rng rng(mix_seed(cfg.seed, kNoiseSeed));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(cfg.sigma2);
  truth.eta.resize(cfg.n);
  for (double& e : truth.eta) e = sd * normal(rng);
  inst.y = matvec(inst.x, std::span<const double>(truth.beta));
  for (std::size_t i = 0; i < cfg.n; ++i) inst.y[i] += truth.eta[i];
  inst.truth = std::move(truth);
  return inst;
}

// ---------------------------------------------------------------------------
// Estimator roster and grid runner

enum class EstimatorKind { fast, svd, fast_bc, svd_bc, oracle, cv_lasso };

constexpr std::string_view to_string(EstimatorKind k) noexcept {
  switch (k) {
    case EstimatorKind::fast: return "fast";
    case EstimatorKind::svd: return "svd";
    case EstimatorKind::fast_bc: return "fast-bc";
    case EstimatorKind::svd_bc: return "svd-bc";
    case EstimatorKind::oracle: return "oracle";
    case EstimatorKind::cv_lasso: return "cv-lasso";
  }
  return "?";
}

// Accepts the canonical names plus the window/window-svd spellings.
inline EstimatorKind parse_estimator(std::string_view name) {
  if (name == "fast" || name == "window") return EstimatorKind::fast;
  if (name == "svd" || name == "window-svd") return EstimatorKind::svd;
  if (name == "fast-bc" || name == "window-bc") return EstimatorKind::fast_bc;
  if (name == "svd-bc" || name == "window-svd-bc") return EstimatorKind::svd_bc;
  if (name == "oracle") return EstimatorKind::oracle;
  if (name == "cv-lasso") return EstimatorKind::cv_lasso;
  throw InvalidInput("unknown estimator '" + std::string(name) + "'");
}

inline std::vector<EstimatorKind> default_roster() {
  return {EstimatorKind::fast, EstimatorKind::svd, EstimatorKind::fast_bc,
          EstimatorKind::svd_bc, EstimatorKind::oracle, EstimatorKind::cv_lasso};
}

struct SimulationOptions {
  std::optional<std::size_t> window = 25;  // nullopt selects L by the inflection rule
  std::size_t cv_folds = 10;
  bool record_runtime = false;             // off keeps reports byte-reproducible
};

struct ReportRow {
  std::string method;
  std::size_t n = 0;
  std::size_t p = 0;
  double alpha = 0;
  double beta_norm = 0;
  double sigma2_true = 0;
  std::size_t trial = 0;
  double sigma2_hat = 0;        // NaN on failure
  std::size_t window_length = 0;  // 0 where no window is used
  std::uint64_t runtime_us = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";    // "ok" or "error: <message>"

  bool ok() const noexcept { return status == "ok"; }
};

struct EstimatorOutcome {
  double sigma2 = 0;
  std::size_t window_length = 0;
};

inline EstimatorOutcome run_estimator(EstimatorKind kind, const RegressionInstance& inst, std::uint64_t seed,
                                      const SimulationOptions& options) {
  const std::size_t n = inst.x.rows();
  const std::size_t p = inst.x.cols();
  const std::span<const double> y(inst.y);
  switch (kind) {
    case EstimatorKind::oracle: {
      detail::require(inst.truth.has_value(), "oracle estimator needs the true noise");
      return {oracle_sigma<double>(inst.truth->eta, n).sigma2, 0};
    }
    case EstimatorKind::cv_lasso: {
      CvOptions cv;
      cv.folds = options.cv_folds;
      return {cv_lasso_variance(inst.x, y, mix_seed(seed, kCvSeed), cv).sigma2, 0};
    }
    default: break;
  }
  const bool svd = kind == EstimatorKind::svd || kind == EstimatorKind::svd_bc;
  const auto pre = svd ? Preconditioner::svd : Preconditioner::fast;
  std::size_t length = 0;
  if (options.window) {
    length = *options.window;
  } else {
    const auto candidates = default_window_candidates(n, p);
    length = select_window_inflection<double>(inst.x, y, candidates, pre).selected;
  }
  auto est = gve_rip<double>(inst.x, y, length, pre);
  if (kind == EstimatorKind::fast_bc || kind == EstimatorKind::svd_bc) est = bias_correct(est, p);
  return {est.sigma2, length};
}

/**
 * Monte-Carlo grid: one row per (cell, trial, estimator), in that order.
 *
 * Trial seeds are mix_seed(base_seed, cell, trial), so the rows depend only
 * on the inputs and never on the worker count. All estimators of a trial
 * see the same instance. An estimator failure becomes an error row.
 */
inline std::vector<ReportRow> run_grid(std::span<const InstanceConfig> grid, std::span<const EstimatorKind> methods,
                                       std::size_t trials, std::uint64_t base_seed, unsigned workers,
                                       const SimulationOptions& options = {}) {
  detail::require(!grid.empty(), "grid must be non-empty");
  detail::require(!methods.empty(), "estimator roster must be non-empty");
  detail::require(trials >= 1, "at least one trial is required");
  const std::size_t jobs = grid.size() * trials;
  std::vector<ReportRow> rows(jobs * methods.size());

  auto run_job = [&](std::size_t job) {
    const std::size_t cell = job / trials;
    const std::size_t trial = job % trials;
    InstanceConfig cfg = grid[cell];
    cfg.seed = mix_seed(base_seed, kTrialSeed, cell, trial);
    std::optional<RegressionInstance> inst;
    std::string setup_error;
    try {
      inst = generate_instance(cfg);
    } catch (const std::exception& e) {
      setup_error = e.what();
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      ReportRow& row = rows[job * methods.size() + m];
      row.method = std::string(to_string(methods[m]));
      row.n = cfg.n;
      row.p = cfg.p;
      row.alpha = cfg.alpha;
      row.beta_norm = cfg.beta_norm;
      row.sigma2_true = cfg.sigma2;
      row.trial = trial;
      row.seed = cfg.seed;
      row.sigma2_hat = std::numeric_limits<double>::quiet_NaN();
      if (!inst) {
        row.status = "error: " + setup_error;
        continue;
      }
      const auto start = std::chrono::steady_clock::now();
      try {
        const auto outcome = run_estimator(methods[m], *inst, cfg.seed, options);
        row.sigma2_hat = outcome.sigma2;
        row.window_length = outcome.window_length;
        row.status = "ok";
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
      }
      if (options.record_runtime)
        row.runtime_us = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count());
    }
  };

  const unsigned pool_size = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs)));
  if (pool_size == 1) {
    for (std::size_t j = 0; j < jobs; ++j) run_job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < pool_size; ++t)
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs; j = next++) run_job(j);
      });
  }
  return rows;
}

// Expands a Cartesian product of p, ||beta||, alpha values into grid cells.
inline std::vector<InstanceConfig> make_grid(std::span<const std::size_t> ps, std::span<const double> beta_norms,
                                             std::span<const double> alphas, std::size_t n, double sigma2,
                                             Ensemble ensemble = Ensemble::gaussian) {
  std::vector<InstanceConfig> grid;
  for (std::size_t p : ps)
    for (double b : beta_norms)
      for (double a : alphas) grid.push_back({n, p, a, b, sigma2, ensemble, 0});
  return grid;
}

struct CellSummary {
  std::string method;
  std::size_t n = 0;
  std::size_t p = 0;
  double alpha = 0;
  double beta_norm = 0;
  double sigma2_true = 0;
  std::size_t count = 0;     // successful rows
  std::size_t failures = 0;  // error rows
  double mean_error = 0;     // mean |sigma2_hat - sigma2_true|
  double bias = 0;
  double std_dev = 0;        // sample standard deviation of sigma2_hat
  double median_relative_error = 0;
};

/**
 * Per (cell, method) moments in first-appearance order. Error rows only
 * increment the failure tally; a group with no successful rows reports NaN
 * moments.
 */
inline std::vector<CellSummary> summarize(std::span<const ReportRow> rows) {
  detail::require(!rows.empty(), "nothing to summarize");
  using Key = std::tuple<std::string, std::size_t, std::size_t, double, double, double>;
  std::map<Key, std::size_t> index;
  std::vector<CellSummary> out;
  std::vector<std::vector<double>> values;
  for (const auto& r : rows) {
    const Key key{r.method, r.n, r.p, r.alpha, r.beta_norm, r.sigma2_true};
    auto [it, fresh] = index.try_emplace(key, out.size());
    if (fresh) {
      out.push_back({r.method, r.n, r.p, r.alpha, r.beta_norm, r.sigma2_true});
      values.emplace_back();
    }
    if (r.ok())
      values[it->second].push_back(r.sigma2_hat);
    else
      ++out[it->second].failures;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t g = 0; g < out.size(); ++g) {
    auto& s = out[g];
    auto& v = values[g];
    s.count = v.size();
    if (v.empty()) {
      s.mean_error = s.bias = s.std_dev = s.median_relative_error = nan;
      continue;
    }
    double sum = 0, abs_err = 0;
    for (double x : v) {
      sum += x;
      abs_err += std::abs(x - s.sigma2_true);
    }
    const double mean = sum / static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    s.mean_error = abs_err / static_cast<double>(v.size());
    s.bias = mean - s.sigma2_true;
    s.std_dev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    std::vector<double> rel;
    rel.reserve(v.size());
    for (double x : v) rel.push_back(std::abs(x - s.sigma2_true) / std::max(s.sigma2_true, 1e-12));
    std::sort(rel.begin(), rel.end());
    const std::size_t mid = rel.size() / 2;
    s.median_relative_error = rel.size() % 2 ? rel[mid] : (rel[mid - 1] + rel[mid]) / 2;
  }
  return out;
}

}  // namespace gve
