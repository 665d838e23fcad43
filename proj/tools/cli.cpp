#include "cli.hpp"

#include "pregols/cochran.hpp"
#include "pregols/csv.hpp"
#include "pregols/errors.hpp"
#include "pregols/interpolators.hpp"
#include "pregols/loo.hpp"
#include "pregols/simharness.hpp"
#include "pregols/variance.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace pregols::cli {

namespace {

using nlohmann::json;

json to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(j)] = m(i, j);
    rows.push_back(r);
  }
  return rows;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RankTolerance tolerance(const std::optional<double>& rank_tol) {
  return rank_tol ? RankTolerance(*rank_tol) : RankTolerance{};
}

DesignPartition load_partition(const std::string& w_path, const std::string& t_path,
                               const RankTolerance& tol) {
  Matrix w = csv::read_matrix(w_path);
  if (t_path.empty()) return DesignPartition::without_unpenalized(std::move(w), tol);
  return DesignPartition(std::move(w), csv::read_matrix(t_path), tol);
}

void add_rank_tol(CLI::App* sub, std::optional<double>& rank_tol) {
  sub->add_option("--rank-tol", rank_tol,
                  "Relative singular-value cutoff for every rank decision "
                  "(default max(rows, cols) * machine epsilon)")
      ->check(CLI::PositiveNumber);
}

// fit ------------------------------------------------------------------------

struct FitArgs {
  std::string w, t, y, variant = "eq5";
  bool full = false;
  std::optional<double> rank_tol;
};

int run_fit(const FitArgs& a, std::ostream& out) {
  const RankTolerance tol = tolerance(a.rank_tol);
  const Vector y = csv::read_vector(a.y);
  out << "block,index,value\n";
  auto emit = [&](const char* block, const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out << block << ',' << i << ',' << fmt(v(i)) << '\n';
  };
  if (a.full) {
    const DesignPartition d = load_partition(a.w, a.t, tol);
    emit("beta", fit_full(d.x(), y, tol).beta_hat);
    return kOk;
  }
  const DesignPartition d = load_partition(a.w, a.t, tol);
  PartialFit fit = fit_partial(d, y);
  if (a.variant != "eq5") {
    if (!d.has_unpenalized()) {
      throw InvalidInputError("variant " + a.variant + " needs --t");
    }
    const PartialFitVariants v = fit_partial_variants(d, y);
    if (a.variant == "remark1") fit.lambda_hat = v.lambda_remark1;
    else if (a.variant == "prep1") fit.lambda_hat = v.lambda_prep1;
    else fit.tau_hat = v.tau_prep2;
  }
  emit("lambda", fit.lambda_hat);
  emit("tau", fit.tau_hat);
  return kOk;
}

// loo ------------------------------------------------------------------------

struct LooArgs {
  std::string w, t, y, out_dir;
  std::optional<std::size_t> index;
  bool check_oracle = false;
  double oracle_tol = 1e-6;
  std::optional<double> rank_tol;
};

int run_loo(const LooArgs& a, std::ostream& out, std::ostream& err) {
  const RankTolerance tol = tolerance(a.rank_tol);
  const DesignPartition d = load_partition(a.w, a.t, tol);
  const Vector y = csv::read_vector(a.y);
  if (static_cast<std::size_t>(y.size()) != d.n()) {
    throw DimensionError("y has length " + std::to_string(y.size()) + ", W has " +
                         std::to_string(d.n()) + " rows");
  }
  const Matrix x = d.x();
  const LooContext ctx(d);
  const Vector full_resid = loo_residuals_full(x, y, tol);

  std::vector<std::size_t> indices;
  if (a.index) {
    if (*a.index >= d.n()) throw DimensionError("--index out of range");
    indices.push_back(*a.index);
  } else {
    for (std::size_t i = 0; i < d.n(); ++i) indices.push_back(i);
  }

  Matrix lambdas(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(d.q()));
  Matrix taus(static_cast<Eigen::Index>(indices.size()), static_cast<Eigen::Index>(d.m()));

  out << "index,residual,residual_full";
  for (std::size_t j = 0; j < d.m(); ++j) out << ",tau_" << j;
  if (a.check_oracle) out << ",coef_gap,residual_gap,residual_full_gap";
  out << '\n';

  double worst = 0.0;
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::size_t i = indices[r];
    const auto ii = static_cast<Eigen::Index>(i);
    const LooCoefficients c = ctx.coefficients(i, y);
    const double resid = ctx.residual_row(i).dot(y);
    lambdas.row(static_cast<Eigen::Index>(r)) = c.lambda.transpose();
    if (d.m() > 0) taus.row(static_cast<Eigen::Index>(r)) = c.tau.transpose();

    out << i << ',' << fmt(resid) << ',' << fmt(full_resid(ii));
    for (Eigen::Index j = 0; j < c.tau.size(); ++j) out << ',' << fmt(c.tau(j));
    if (a.check_oracle) {
      const LooCoefficients ref = brute_force_refit(d, y, i);
      double pred = d.w().row(ii).dot(ref.lambda);
      if (d.m() > 0) pred += d.t().row(ii).dot(ref.tau);
      const FullFit ref_full = fit_full(drop_row(x, i), drop_entry(y, i), tol);
      const double pred_full = x.row(ii).dot(ref_full.beta_hat);

      Vector got(c.lambda.size() + c.tau.size()), want(got.size());
      got << c.lambda, c.tau;
      want << ref.lambda, ref.tau;
      const double coef_gap = scaled_diff(got, want);
      const double resid_gap = std::abs(resid - (y(ii) - pred)) / std::max(1.0, std::abs(y(ii) - pred));
      const double full_gap = std::abs(full_resid(ii) - (y(ii) - pred_full)) /
                              std::max(1.0, std::abs(y(ii) - pred_full));
      worst = std::max({worst, coef_gap, resid_gap, full_gap});
      out << ',' << fmt(coef_gap) << ',' << fmt(resid_gap) << ',' << fmt(full_gap);
    }
    out << '\n';
  }

  if (!a.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(a.out_dir, ec);
    if (ec) throw IoError("cannot create " + a.out_dir + ": " + ec.message());
    csv::write_matrix(std::filesystem::path(a.out_dir) / "lambda_loo.csv", lambdas);
    if (d.m() > 0) csv::write_matrix(std::filesystem::path(a.out_dir) / "tau_loo.csv", taus);
  }
  if (a.check_oracle) {
    const bool ok = worst <= a.oracle_tol;
    err << "oracle check " << (ok ? "passed" : "FAILED") << ": max relative gap " << fmt(worst)
        << " (tolerance " << fmt(a.oracle_tol) << ")\n";
    if (!ok) return kOracleMismatch;
  }
  return kOk;
}

// cochran --------------------------------------------------------------------

struct CochranArgs {
  std::string z, u, t, y;
  std::optional<std::uint64_t> perturb_seed;
  std::optional<double> rank_tol;
};

int run_cochran(const CochranArgs& a, std::ostream& out) {
  const RankTolerance tol = tolerance(a.rank_tol);
  const CochranDesign d(csv::read_matrix(a.z), csv::read_matrix(a.u), csv::read_matrix(a.t), tol);
  const Vector y = csv::read_vector(a.y);
  if (static_cast<std::size_t>(y.size()) != d.n()) {
    throw DimensionError("y has length " + std::to_string(y.size()) + ", Z has " +
                         std::to_string(d.n()) + " rows");
  }
  const CochranFits f = fit_all(d, y);
  json j;
  j["long"] = {{"alpha", to_json(f.long_fit.alpha_hat)},
               {"gamma", to_json(f.long_fit.gamma_hat)},
               {"tau", to_json(f.long_fit.tau_hat)}};
  j["short"] = {{"alpha", to_json(f.short_fit.alpha_tilde)},
                {"tau", to_json(f.short_fit.tau_tilde)}};
  j["aux"] = {{"Delta", to_json(f.aux_fit.delta_mat)}, {"delta", to_json(f.aux_fit.delta_small)}};
  j["image_gap"] = image_gap(d, f);
  j["coeff_gap"] = coeff_gap(f);
  if (a.perturb_seed) {
    std::mt19937_64 rng(*a.perturb_seed);
    j["perturbed_image_gap"] = image_gap(d, perturb_within_solution_sets(d, f, rng));
  }
  const Matrix& t = d.t();
  bool ovb_shape = t.cols() == 2;
  for (Eigen::Index i = 0; ovb_shape && i < t.rows(); ++i) {
    ovb_shape = (t(i, 0) == 0.0 || t(i, 0) == 1.0) && t(i, 1) == 1.0;
  }
  if (ovb_shape) {
    const OvbDecomposition o = ovb_decompose(d, y);
    j["ovb"] = {{"tau_long", o.tau_long_d},   {"tau_short", o.tau_short_d},
                {"bias", o.bias},             {"impact", to_json(o.impact)},
                {"imbalance", to_json(Vector(o.imbalance.transpose()))},
                {"decomposition_gap", o.decomposition_gap}};
  }
  out << j.dump(2) << '\n';
  return kOk;
}

// variance -------------------------------------------------------------------

struct VarianceArgs {
  std::string w, t, y, truth, estimator = "all";
  std::optional<double> sigma2;
  std::optional<double> rank_tol;
};

int run_variance(const VarianceArgs& a, std::ostream& out) {
  const RankTolerance tol = tolerance(a.rank_tol);
  const DesignPartition d = load_partition(a.w, a.t, tol);
  const Vector y = csv::read_vector(a.y);
  std::optional<GaussMarkovTruth> truth;
  if (!a.truth.empty()) {
    truth = GaussMarkovTruth{csv::read_vector(a.truth), a.sigma2.value_or(1.0)};
    truth->validate(d.p());
  }
  std::vector<Estimator> ids;
  if (a.estimator == "all") ids.assign(kAllEstimators.begin(), kAllEstimators.end());
  else ids.push_back(parse_estimator(a.estimator));

  json arr = json::array();
  for (const Estimator id : ids) {
    const VarianceReport r = truth ? estimate_variance(id, d, y, *truth) : estimate_variance(id, d, y);
    json j = {{"estimator", std::string(to_string(r.estimator))},
              {"estimate", r.estimate},
              {"denominator", r.denominator}};
    if (r.expected_bias) {
      j["expected_bias"] = *r.expected_bias;
      j["sigma2"] = truth->sigma2;
    }
    if (r.alt_denominator) j["alt_denominator"] = *r.alt_denominator;
    arr.push_back(std::move(j));
  }
  out << (ids.size() == 1 ? arr[0] : arr).dump(2) << '\n';
  return kOk;
}

// simulate -------------------------------------------------------------------

struct SimulateArgs {
  std::string experiment, model = "all", config, out_dir, dump_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials, draws, threads;
  bool paper_scale = false, include_w = false;
  std::optional<double> rank_tol;
};

int run_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  sim::ExperimentConfig cfg;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw IoError("cannot open " + a.config);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw IoError(a.config + ": " + e.what());
    }
    cfg = sim::config_from_json(j);
  } else {
    if (a.experiment.empty()) throw InvalidInputError("simulate needs --experiment or --config");
    cfg = sim::default_config(sim::parse_experiment(a.experiment), a.paper_scale);
    if (a.model != "all") cfg.models = {dgp::parse_model(a.model)};
  }
  if (a.seed) cfg.seed = *a.seed;
  if (a.trials) cfg.trials = *a.trials;
  if (a.draws) cfg.draws = *a.draws;
  if (a.threads) cfg.threads = *a.threads;
  if (a.rank_tol) cfg.tol = RankTolerance(*a.rank_tol);
  cfg.validate();

  const sim::ExperimentReport report = sim::run_experiment(cfg);
  sim::write_report(report, a.out_dir, a.include_w);
  {
    std::ofstream cfg_out(std::filesystem::path(a.out_dir) / "config.json");
    if (!cfg_out) throw IoError("cannot write config.json in " + a.out_dir);
    cfg_out << sim::to_json(cfg).dump(2) << '\n';
  }

  if (!a.dump_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(a.dump_dir, ec);
    if (ec) throw IoError("cannot create " + a.dump_dir + ": " + ec.message());
    const std::string exp(sim::to_string(cfg.experiment));
    for (const auto model : cfg.models) {
      for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
        const sim::TrialDesign td = sim::trial_design(cfg, model, g, 0);
        const std::string stem =
            exp + "_" + std::string(dgp::to_string(model)) + "_grid" + std::to_string(g);
        csv::write_matrix(std::filesystem::path(a.dump_dir) / (stem + "_w.csv"), td.w);
        csv::write_matrix(std::filesystem::path(a.dump_dir) / (stem + "_t.csv"), td.t);
      }
    }
  }

  out << sim::report_csv(report, a.include_w, false);
  // failures and rejections repeat across the estimator rows of a cell
  const std::size_t per_cell =
      cfg.experiment == sim::Experiment::ate ? 2 : cfg.estimators.size();
  std::size_t failures = 0, rejections = 0;
  for (std::size_t k = 0; k < report.cells.size(); k += per_cell) {
    failures += report.cells[k].failures;
    rejections += report.cells[k].rejections;
  }
  err << "simulate " << sim::to_string(cfg.experiment) << ": " << report.cells.size()
      << " rows, seed " << cfg.seed << ", " << failures << " failed trials, " << rejections
      << " rank rejections; wrote " << a.out_dir << '\n';
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum-norm OLS interpolators: fits, leave-one-out, Cochran identities, "
               "variance estimators and bias simulations",
               "pregols"};
  app.require_subcommand(1);
  app.allow_extras(false);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the partially (or fully) regularized interpolator");
  fit_cmd->add_option("--w", fit.w, "Penalized block W (CSV)")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--t", fit.t, "Unpenalized block T (CSV); omit for W only")
      ->check(CLI::ExistingFile);
  fit_cmd->add_option("--y", fit.y, "Response (CSV)")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--variant", fit.variant, "Coefficient expression")
      ->check(CLI::IsMember({"eq5", "remark1", "prep1", "prep2"}));
  fit_cmd->add_flag("--full", fit.full, "Fully regularized fit on X = [W, T]");
  add_rank_tol(fit_cmd, fit.rank_tol);

  LooArgs loo;
  auto* loo_cmd = app.add_subcommand("loo", "Closed-form leave-one-out coefficients and residuals");
  loo_cmd->add_option("--w", loo.w, "Penalized block W (CSV)")->required()->check(CLI::ExistingFile);
  loo_cmd->add_option("--t", loo.t, "Unpenalized block T (CSV)")->check(CLI::ExistingFile);
  loo_cmd->add_option("--y", loo.y, "Response (CSV)")->required()->check(CLI::ExistingFile);
  loo_cmd->add_option("--index", loo.index, "Single 0-based index (default: all)");
  loo_cmd->add_flag("--check-oracle", loo.check_oracle,
                    "Compare against refits without row i; exit 3 on mismatch");
  loo_cmd->add_option("--oracle-tol", loo.oracle_tol, "Relative tolerance for --check-oracle")
      ->check(CLI::PositiveNumber);
  loo_cmd->add_option("--out", loo.out_dir, "Directory for lambda_loo.csv and tau_loo.csv");
  add_rank_tol(loo_cmd, loo.rank_tol);

  CochranArgs co;
  auto* co_cmd = app.add_subcommand("cochran", "Long, short and auxiliary fits with identity checks");
  co_cmd->add_option("--z", co.z, "Retained block Z (CSV)")->required()->check(CLI::ExistingFile);
  co_cmd->add_option("--u", co.u, "Omitted block U (CSV)")->required()->check(CLI::ExistingFile);
  co_cmd->add_option("--t", co.t, "Unpenalized block T (CSV)")->required()->check(CLI::ExistingFile);
  co_cmd->add_option("--y", co.y, "Response (CSV)")->required()->check(CLI::ExistingFile);
  co_cmd->add_option("--perturb-seed", co.perturb_seed,
                     "Also check the image identity on perturbed non-canonical solutions");
  add_rank_tol(co_cmd, co.rank_tol);

  VarianceArgs va;
  auto* va_cmd = app.add_subcommand("variance", "Noise-variance estimators");
  va_cmd->add_option("--w", va.w, "Penalized block W (CSV)")->required()->check(CLI::ExistingFile);
  va_cmd->add_option("--t", va.t, "Unpenalized block T (CSV)")->required()->check(CLI::ExistingFile);
  va_cmd->add_option("--y", va.y, "Response (CSV)")->required()->check(CLI::ExistingFile);
  va_cmd->add_option("--estimator", va.estimator, "Estimator")
      ->check(CLI::IsMember({"full", "partial", "w", "wc", "all"}));
  auto* truth_opt = va_cmd->add_option("--truth", va.truth, "True beta = (W coefs, T coefs) (CSV)")
                        ->check(CLI::ExistingFile);
  va_cmd->add_option("--sigma2", va.sigma2, "True noise variance (with --truth)")
      ->needs(truth_opt);
  add_rank_tol(va_cmd, va.rank_tol);

  SimulateArgs si;
  auto* si_cmd = app.add_subcommand("simulate", "Run a bias simulation and write CSV/SVG output");
  auto* exp_opt = si_cmd->add_option("--experiment", si.experiment, "Experiment")
                      ->check(CLI::IsMember({"sim1", "sim2", "sim3", "sim4", "ate"}));
  auto* model_opt = si_cmd->add_option("--model", si.model, "Covariate model")
                        ->check(CLI::IsMember({"normal", "spiked", "geometric", "all"}));
  si_cmd->add_option("--seed", si.seed, "Root seed (u64)");
  auto* paper_opt = si_cmd->add_flag("--paper-scale", si.paper_scale, "100 trials x 100 draws");
  si_cmd->add_flag("--include-w", si.include_w, "Merge w estimator rows into report.csv");
  si_cmd->add_option("--out", si.out_dir, "Output directory")->required();
  auto* cfg_opt = si_cmd->add_option("--config", si.config, "JSON experiment config")
                      ->check(CLI::ExistingFile);
  cfg_opt->excludes(exp_opt)->excludes(model_opt)->excludes(paper_opt);
  si_cmd->add_option("--trials", si.trials, "Override trial count")->check(CLI::PositiveNumber);
  si_cmd->add_option("--draws", si.draws, "Override draws per trial")->check(CLI::PositiveNumber);
  si_cmd->add_option("--threads", si.threads, "Worker threads (default PREGOLS_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  si_cmd->add_option("--dump-dir", si.dump_dir, "Write the first trial's design per cell as CSV");
  add_rank_tol(si_cmd, si.rank_tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kIoOrParse;
  }

  try {
    if (*fit_cmd) return run_fit(fit, out);
    if (*loo_cmd) return run_loo(loo, out, err);
    if (*co_cmd) return run_cochran(co, out);
    if (*va_cmd) return run_variance(va, out);
    if (*si_cmd) return run_simulate(si, out, err);
  } catch (const AssumptionError& e) {
    err << "pregols: " << e.what() << '\n';
    return kAssumption;
  } catch (const std::exception& e) {
    err << "pregols: " << e.what() << '\n';
    return kIoOrParse;
  }
  return kIoOrParse;
}

}  // namespace pregols::cli
