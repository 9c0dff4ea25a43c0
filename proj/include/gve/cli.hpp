#pragma once

// Command-line front end. Kept header-only so tests can drive the exact
// code path the `gve` binary runs.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "gve/error.hpp"
#include "gve/estimators.hpp"
#include "gve/io.hpp"
#include "gve/simulation.hpp"
#include "gve/window_selection.hpp"

namespace gve::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3 };

struct EstimateArgs {
  std::optional<std::string> design;
  std::string response;
  std::string method;
  std::string window = "auto";
  bool bias_correct = false;
  bool emit_lambda = false;
};

struct SimulateArgs {
  std::vector<std::size_t> p;
  std::vector<double> beta_norm;
  std::vector<double> alpha;
  std::size_t n = 100;
  double sigma2 = 1.0;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> methods;
  unsigned workers = 1;
  std::string out;
  std::string ensemble = "gaussian";
  std::string window = "25";
  std::size_t folds = 10;
  bool timing = false;
  std::optional<std::string> summary;
};

struct SweepArgs {
  std::optional<std::string> design;
  std::string response;
  std::string method;
  std::string candidates = "auto";
  std::optional<double> sigma2_true;
};

namespace detail {

// sigma2-hat as a function of L for one method on loaded data.
struct Problem {
  std::optional<DenseMatrix> x;
  std::vector<double> y;
  Method method = Method::ortho;

  // Length of the windowed domain.
  std::size_t domain() const {
    if (method == Method::tv) return y.empty() ? 0 : y.size() - 1;
    return x ? x->cols() : y.size();
  }
  // Largest admissible window length.
  std::size_t max_window() const { return x && method != Method::ortho ? x->rows() : domain(); }

  VarianceEstimate estimate(std::size_t length) const {
    const std::span<const double> ys(y);
    if (method == Method::tv) return gve_tv(ys, length);
    if (!x) return gve_orthonormal(ys, length);
    if (method == Method::ortho) {
      const auto xty = transpose_matvec(*x, ys);
      return gve_orthonormal(std::span<const double>(xty), length);
    }
    return gve_rip(*x, ys, length, method == Method::svd ? Preconditioner::svd : Preconditioner::fast);
  }
};

inline Method parse_method(const std::string& name) {
  if (name == "ortho") return Method::ortho;
  if (name == "svd") return Method::svd;
  if (name == "fast") return Method::fast;
  if (name == "tv") return Method::tv;
  throw InvalidInput("unknown method '" + name + "' (expected ortho, svd, fast or tv)");
}

inline Problem load_problem(const std::optional<std::string>& design, const std::string& response,
                            const std::string& method) {
  Problem prob;
  prob.method = parse_method(method);
  prob.y = load_vector(response);
  if (design) {
    if (prob.method == Method::tv) throw InvalidInput("method tv works on the response directly; omit --design");
    prob.x = load_matrix(*design);
    if (prob.x->rows() != prob.y.size())
      throw InvalidInput("design has " + std::to_string(prob.x->rows()) + " rows but the response has " +
                         std::to_string(prob.y.size()) + " entries");
  }
  return prob;
}

inline std::size_t parse_count(const std::string& text, const char* what) {
  std::size_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw InvalidInput(std::string("invalid ") + what + " '" + text + "'");
  return value;
}

inline std::vector<std::size_t> parse_count_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string::npos ? text.size() : comma;
    out.push_back(parse_count(text.substr(start, end - start), what));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Maps library errors onto the exit-code contract.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const DegenerateBlock& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const ConvergenceFailure& e) {
    err << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace detail

inline int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto prob = detail::load_problem(args.design, args.response, args.method);
    std::size_t length = 0;
    if (args.window == "auto") {
      const auto candidates = default_window_candidates(prob.max_window(), prob.domain());
      length = select_window_inflection(candidates, [&](std::size_t l) { return prob.estimate(l).sigma2; }).selected;
    } else {
      length = detail::parse_count(args.window, "window length");
    }
    auto est = prob.estimate(length);
    if (args.bias_correct) est = bias_correct(est, prob.domain());
    std::string line = "sigma2=" + format_real(est.sigma2) + " sigma=" + format_real(est.sigma) +
                       " L=" + std::to_string(length);
    if (args.emit_lambda) line += " lambda=" + format_real(lambda_from_sigma(est.sigma2, prob.y.size()));
    out << line << '\n' << std::flush;
    return static_cast<int>(kOk);
  });
}

inline int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    Ensemble ensemble = Ensemble::gaussian;
    if (args.ensemble == "orthonormal")
      ensemble = Ensemble::orthonormal;
    else if (args.ensemble != "gaussian")
      throw InvalidInput("unknown ensemble '" + args.ensemble + "'");
    std::vector<EstimatorKind> roster;
    for (const auto& m : args.methods) roster.push_back(parse_estimator(m));
    if (roster.empty()) roster = default_roster();

    SimulationOptions options;
    options.cv_folds = args.folds;
    options.record_runtime = args.timing;
    if (args.window == "auto")
      options.window.reset();
    else
      options.window = detail::parse_count(args.window, "window length");

    const auto grid = make_grid(args.p, args.beta_norm, args.alpha, args.n, args.sigma2, ensemble);
    for (const auto& cfg : grid) validate(cfg);
    const auto rows = run_grid(grid, roster, args.trials, args.seed, args.workers, options);

    std::ofstream file(args.out, std::ios::binary);
    if (!file) throw InvalidInput("cannot write '" + args.out + "'");
    write_report(file, rows);
    file.close();
    if (args.summary) {
      std::ofstream sfile(*args.summary, std::ios::binary);
      if (!sfile) throw InvalidInput("cannot write '" + *args.summary + "'");
      write_summary(sfile, summarize(rows));
    }
    std::size_t failures = 0;
    for (const auto& r : rows) failures += r.ok() ? 0 : 1;
    out << "rows=" << rows.size() << " failures=" << failures << " out=" << args.out << '\n' << std::flush;
    return static_cast<int>(kOk);
  });
}

inline int cmd_window_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto prob = detail::load_problem(args.design, args.response, args.method);
    std::vector<std::size_t> candidates;
    if (args.candidates == "all")
      candidates = all_window_candidates(prob.domain(), prob.max_window());
    else if (args.candidates == "auto")
      candidates = default_window_candidates(prob.max_window(), prob.domain());
    else
      candidates = detail::parse_count_list(args.candidates, "window candidate");
    if (candidates.empty()) throw InvalidInput("no window candidates");

    auto estimator = [&](std::size_t l) { return prob.estimate(l).sigma2; };
    std::ostringstream body;
    std::string rule;
    WindowSelection sel;
    if (args.sigma2_true) {
      sel = select_window_oracle(candidates, *args.sigma2_true, estimator);
      rule = "oracle";
      body << "L,sigma2_hat,abs_error\n";
      for (std::size_t i = 0; i < sel.candidates.size(); ++i)
        body << sel.candidates[i] << ',' << format_real(sel.estimates[i]) << ',' << format_real(sel.errors[i]) << '\n';
    } else {
      sel = select_window_inflection(candidates, estimator);
      rule = "inflection";
      body << "L,sigma2_hat\n";
      for (std::size_t i = 0; i < sel.candidates.size(); ++i)
        body << sel.candidates[i] << ',' << format_real(sel.estimates[i]) << '\n';
    }
    body << "# selected L=" << sel.selected << " rule=" << rule << '\n';
    out << body.str() << std::flush;
    return static_cast<int>(kOk);
  });
}

/**
 * Parses argv-style arguments (without the program name) and runs one
 * subcommand: estimate, simulate or window-sweep.
 */
inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Greedy window estimators of the noise variance in sparse linear regression", "gve"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "estimate the noise variance of one dataset");
  estimate->add_option("--design", est.design, "design matrix CSV (omit for identity mode)");
  estimate->add_option("--response", est.response, "response vector, one value per line")->required();
  estimate->add_option("--method", est.method, "ortho | svd | fast | tv")->required();
  estimate->add_option("--window", est.window, "window length or 'auto'")->capture_default_str();
  estimate->add_flag("--bias-correct", est.bias_correct, "multiply by 1 + 1/log(p)");
  estimate->add_flag("--emit-lambda", est.emit_lambda, "also print lambda = 4 sigma^2 log(n) / n");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run the Monte-Carlo comparison grid");
  simulate->add_option("--p", sim.p, "comma-separated column counts")->required()->delimiter(',');
  simulate->add_option("--beta-norm", sim.beta_norm, "comma-separated signal norms")->required()->delimiter(',');
  simulate->add_option("--alpha", sim.alpha, "comma-separated sparsity exponents")->required()->delimiter(',');
  simulate->add_option("--n", sim.n, "rows")->capture_default_str();
  simulate->add_option("--sigma2", sim.sigma2, "true noise variance")->capture_default_str();
  simulate->add_option("--trials", sim.trials, "trials per cell")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "base seed")->capture_default_str();
  simulate->add_option("--methods", sim.methods, "comma-separated estimators")->delimiter(',');
  simulate->add_option("--workers", sim.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--out", sim.out, "report CSV path")->required();
  simulate->add_option("--ensemble", sim.ensemble, "gaussian | orthonormal")->capture_default_str();
  simulate->add_option("--window", sim.window, "window length or 'auto'")->capture_default_str();
  simulate->add_option("--folds", sim.folds, "cv-lasso folds")->capture_default_str();
  simulate->add_flag("--timing", sim.timing, "record wall-clock runtimes (breaks byte reproducibility)");
  simulate->add_option("--summary", sim.summary, "optional per-cell summary CSV path");

  SweepArgs sweep;
  auto* window_sweep = app.add_subcommand("window-sweep", "evaluate the estimator over window lengths");
  window_sweep->add_option("--design", sweep.design, "design matrix CSV (omit for identity mode)");
  window_sweep->add_option("--response", sweep.response, "response vector")->required();
  window_sweep->add_option("--method", sweep.method, "ortho | svd | fast | tv")->required();
  window_sweep->add_option("--candidates", sweep.candidates, "comma-separated lengths, 'all' or 'auto'")
      ->capture_default_str();
  window_sweep->add_option("--sigma2-true", sweep.sigma2_true, "true variance; enables oracle selection");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  if (estimate->parsed()) return cmd_estimate(est, out, err);
  if (simulate->parsed()) return cmd_simulate(sim, out, err);
  return cmd_window_sweep(sweep, out, err);
}

}  // namespace gve::cli
