#include "pregols/simharness.hpp"

#include "pregols/errors.hpp"
#include "pregols/interpolators.hpp"
#include "pregols/svg_chart.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace pregols::sim {

namespace {

struct CellDims {
  std::size_t n = 0;
  std::size_t p = 0;
  double sigma = 1.0;
  double beta0 = 1.0;
};

struct TrialOutcome {
  bool ok = false;
  std::string assumption;
  std::string reason;
  std::vector<double> bias;           // per estimator, mean over draws
  std::vector<double> expected_bias;  // per estimator, exact on this design
  std::size_t rejections = 0;
};

std::size_t as_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e6) {
    throw InvalidInputError(std::string(what) + " grid values must be positive integers, got " +
                            std::to_string(v));
  }
  return static_cast<std::size_t>(v);
}

CellDims cell_dims(const ExperimentConfig& cfg, double g) {
  CellDims c{cfg.n, cfg.p, cfg.sigma, cfg.beta0};
  switch (cfg.experiment) {
    case Experiment::sim1:
      c.n = as_count(g, "sim1");
      break;
    case Experiment::sim2:
      c.p = as_count(g, "sim2");
      c.n = static_cast<std::size_t>(std::llround(cfg.n_over_p * static_cast<double>(c.p)));
      break;
    case Experiment::sim3:
      c.sigma = g;
      break;
    case Experiment::sim4:
      c.beta0 = g;
      break;
    case Experiment::ate:
      break;
  }
  return c;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> estimator_names(const ExperimentConfig& cfg) {
  std::vector<std::string> names;
  if (cfg.experiment == Experiment::ate) return {"full", "partial"};
  for (const Estimator e : cfg.estimators) names.emplace_back(to_string(e));
  return names;
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : pairwise_sum(v) / static_cast<double>(v.size());
}

dgp::CovariateDraw draw_covariates(const ExperimentConfig& cfg, dgp::CovariateModel model,
                                   const CellDims& dims, dgp::Rng& rng) {
  dgp::CovariateConfig cc = cfg.covariates;
  cc.model = model;
  cc.n = dims.n;
  cc.q = dims.p - 1;
  return dgp::gen_covariates_full_rank(cc, rng, cfg.tol);
}

dgp::AteParams ate_params(const ExperimentConfig& cfg) {
  dgp::AteParams params;
  params.n = cfg.n;
  params.q = cfg.p - 2;
  params.sigma = cfg.sigma;
  params.alpha0 = cfg.beta0;
  params.covariates = cfg.covariates;
  params.covariates.model = dgp::CovariateModel::spiked;
  return params;
}

TrialOutcome variance_trial(const ExperimentConfig& cfg, dgp::CovariateModel model,
                            std::size_t grid_index, std::size_t trial) {
  const CellDims dims = cell_dims(cfg, cfg.grid[grid_index]);
  const std::size_t q = dims.p - 1;
  const auto n = static_cast<Eigen::Index>(dims.n);
  const double sigma2 = dims.sigma * dims.sigma;
  dgp::Rng rng = dgp::Rng::stream(cfg.seed, trial_stream(model, grid_index, trial));

  TrialOutcome out;
  try {
    dgp::CovariateDraw draw = draw_covariates(cfg, model, dims, rng);
    out.rejections = draw.rejections;
    const DesignPartition d(std::move(draw.w), Matrix::Ones(n, 1), cfg.tol);

    std::vector<EstimatorOperator> ops;
    ops.reserve(cfg.estimators.size());
    for (const Estimator e : cfg.estimators) ops.push_back(make_operator(e, d));

    const Vector beta1 = dgp::default_beta1(q, dims.p);
    const Vector mu = dgp::gen_response(d.w(), beta1, dims.beta0, 0.0, rng);
    for (const auto& op : ops) out.expected_bias.push_back(op.bias(mu));

    std::vector<std::vector<double>> per_draw(ops.size(), std::vector<double>(cfg.draws));
    for (std::size_t k = 0; k < cfg.draws; ++k) {
      const Vector y = mu + dims.sigma * rng.normal_vector(n);
      for (std::size_t e = 0; e < ops.size(); ++e) per_draw[e][k] = ops[e].estimate(y) - sigma2;
    }
    for (const auto& v : per_draw) out.bias.push_back(mean_of(v));
    out.ok = true;
  } catch (const AssumptionError& e) {
    out.assumption = e.assumption();
    out.reason = e.what();
  }
  return out;
}

TrialOutcome ate_trial(const ExperimentConfig& cfg, std::size_t grid_index, std::size_t trial) {
  const double tau = cfg.grid[grid_index];
  dgp::Rng rng =
      dgp::Rng::stream(cfg.seed, trial_stream(dgp::CovariateModel::spiked, grid_index, trial));
  const dgp::AteParams params = ate_params(cfg);

  TrialOutcome out;
  try {
    const dgp::AteDesign design = dgp::gen_ate_design(params, rng, cfg.tol);
    out.rejections = design.rejections;
    const auto n = static_cast<Eigen::Index>(params.n);
    const auto q = static_cast<Eigen::Index>(params.q);

    // Both D coefficients are fixed linear functionals of y.
    const RowVector a_full = pinv(design.x(), cfg.tol).row(q);
    const DesignPartition d(design.w, design.t(), cfg.tol);
    const RowVector a_partial = partial_coefficients(d, Matrix::Identity(n, n)).tau.row(0);

    const Vector mu = dgp::ate_mean(design, params, tau);
    out.expected_bias = {a_full.dot(mu) - tau, a_partial.dot(mu) - tau};

    std::vector<double> full(cfg.draws), partial(cfg.draws);
    for (std::size_t k = 0; k < cfg.draws; ++k) {
      const Vector y = mu + params.sigma * rng.normal_vector(n);
      full[k] = a_full.dot(y) - tau;
      partial[k] = a_partial.dot(y) - tau;
    }
    out.bias = {mean_of(full), mean_of(partial)};
    out.ok = true;
  } catch (const AssumptionError& e) {
    out.assumption = e.assumption();
    out.reason = e.what();
  }
  return out;
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ExperimentReport run(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n_models = cfg.models.size();
  const std::size_t n_grid = cfg.grid.size();
  const std::size_t per_model = n_grid * cfg.trials;
  const bool ate = cfg.experiment == Experiment::ate;

  std::vector<TrialOutcome> outcomes(n_models * per_model);
  parallel_for(outcomes.size(), resolve_threads(cfg.threads), [&](std::size_t idx) {
    const std::size_t mi = idx / per_model;
    const std::size_t gi = (idx % per_model) / cfg.trials;
    const std::size_t ti = idx % cfg.trials;
    outcomes[idx] = ate ? ate_trial(cfg, gi, ti) : variance_trial(cfg, cfg.models[mi], gi, ti);
  });

  const auto names = estimator_names(cfg);
  ExperimentReport report;
  report.config = cfg;
  for (std::size_t mi = 0; mi < n_models; ++mi) {
    for (std::size_t gi = 0; gi < n_grid; ++gi) {
      const std::size_t base = mi * per_model + gi * cfg.trials;
      std::size_t failures = 0, rejections = 0;
      std::vector<std::string> reasons;
      std::string assumption = "A1";
      for (std::size_t t = 0; t < cfg.trials; ++t) {
        const auto& o = outcomes[base + t];
        rejections += o.rejections;
        if (!o.ok) {
          if (failures == 0) assumption = o.assumption;
          ++failures;
          reasons.push_back("trial " + std::to_string(t) + ": " + o.reason);
        }
      }
      if (static_cast<double>(failures) > cfg.max_failure_rate * static_cast<double>(cfg.trials)) {
        throw AssumptionError(assumption, std::string(to_string(cfg.experiment)) + " cell (" +
                                              std::string(dgp::to_string(cfg.models[mi])) +
                                              ", " + fmt(cfg.grid[gi]) + "): " +
                                              std::to_string(failures) + " of " +
                                              std::to_string(cfg.trials) +
                                              " trials failed; first: " + reasons.front());
      }
      for (std::size_t e = 0; e < names.size(); ++e) {
        CellResult cell;
        cell.experiment = cfg.experiment;
        cell.model = cfg.models[mi];
        cell.grid_value = cfg.grid[gi];
        cell.estimator = names[e];
        cell.trials = cfg.trials;
        cell.draws = cfg.draws;
        cell.failures = failures;
        cell.seed = cfg.seed;
        cell.rejections = rejections;
        cell.failure_reasons = reasons;
        std::vector<double> expected;
        for (std::size_t t = 0; t < cfg.trials; ++t) {
          const auto& o = outcomes[base + t];
          if (!o.ok) continue;
          cell.trial_biases.push_back(o.bias[e]);
          expected.push_back(o.expected_bias[e]);
        }
        const MeanSe ms = mean_and_se(cell.trial_biases);
        cell.mean_bias = ms.mean;
        cell.std_error = ms.std_error;
        cell.mean_expected_bias = mean_of(expected);
        report.cells.push_back(std::move(cell));
      }
    }
  }
  return report;
}

const char* x_label(Experiment e) {
  switch (e) {
    case Experiment::sim1: return "sample size n";
    case Experiment::sim2: return "covariate size p (n = 0.8 p)";
    case Experiment::sim3: return "noise level sigma";
    case Experiment::sim4: return "intercept beta_0";
    case Experiment::ate: return "treatment effect tau";
  }
  return "";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::sim1: return "sim1";
    case Experiment::sim2: return "sim2";
    case Experiment::sim3: return "sim3";
    case Experiment::sim4: return "sim4";
    case Experiment::ate: return "ate";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  for (const Experiment e : {Experiment::sim1, Experiment::sim2, Experiment::sim3,
                             Experiment::sim4, Experiment::ate}) {
    if (to_string(e) == name) return e;
  }
  throw InvalidInputError("unknown experiment '" + std::string(name) +
                          "' (expected sim1, sim2, sim3, sim4 or ate)");
}

void ExperimentConfig::validate() const {
  const std::string name(to_string(experiment));
  if (grid.empty()) throw InvalidInputError(name + ": grid must be non-empty");
  if (models.empty()) throw InvalidInputError(name + ": at least one covariate model required");
  if (trials == 0 || draws == 0) throw InvalidInputError(name + ": trials and draws must be >= 1");
  if (trials > 0xFFFFFFFFULL || grid.size() > 0xFFFFULL) {
    throw InvalidInputError(name + ": grid or trial count too large for stream indexing");
  }
  if (!(max_failure_rate >= 0.0 && max_failure_rate <= 1.0)) {
    throw InvalidInputError(name + ": max_failure_rate must lie in [0, 1]");
  }
  for (const double g : grid) {
    if (!std::isfinite(g)) throw InvalidInputError(name + ": grid values must be finite");
  }
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw InvalidInputError(name + ": sigma must be non-negative");
  }
  if (experiment == Experiment::ate) {
    for (const auto m : models) {
      if (m != dgp::CovariateModel::spiked) {
        throw InvalidInputError("ate: only the spiked covariate model is supported");
      }
    }
    if (p < 3 || n >= p - 2 || n < 3) {
      throw InvalidInputError("ate: need 3 <= n < p - 2, got n = " + std::to_string(n) +
                              ", p = " + std::to_string(p));
    }
    return;
  }
  if (estimators.empty()) throw InvalidInputError(name + ": at least one estimator required");
  if (experiment == Experiment::sim3 || experiment == Experiment::sim4) {
    if (n < 2 || p < n + 1) {
      throw InvalidInputError(name + ": need 2 <= n < p, got n = " + std::to_string(n) +
                              ", p = " + std::to_string(p));
    }
  }
  if (experiment == Experiment::sim3) {
    for (const double g : grid) {
      if (!(g > 0.0)) throw InvalidInputError("sim3: sigma grid values must be positive");
    }
  } else if (!(sigma > 0.0)) {
    throw InvalidInputError(name + ": sigma must be positive");
  }
  for (const double g : grid) {
    const CellDims c = cell_dims(*this, g);
    if (c.n < 2 || c.n >= c.p) {
      throw InvalidInputError(name + ": grid value " + fmt(g) + " gives n = " +
                              std::to_string(c.n) + ", p = " + std::to_string(c.p) +
                              "; need 2 <= n < p");
    }
  }
}

ExperimentConfig default_config(Experiment e, bool paper_scale) {
  ExperimentConfig c;
  c.experiment = e;
  c.trials = paper_scale ? 100 : 25;
  c.draws = paper_scale ? 100 : 25;
  c.models = {dgp::CovariateModel::standard_normal, dgp::CovariateModel::spiked,
              dgp::CovariateModel::geometric};
  c.estimators.assign(kAllEstimators.begin(), kAllEstimators.end());
  switch (e) {
    case Experiment::sim1:
      c.grid = {20, 40, 60, 80, 99};
      break;
    case Experiment::sim2:
      c.grid = {50, 75, 100, 125, 150};
      break;
    case Experiment::sim3:
    case Experiment::sim4:
      c.grid = {1, 2, 5, 7, 10};
      break;
    case Experiment::ate:
      c.grid = {-8, -6, -4, -2, -1, 0, 1, 2, 4, 6, 8};
      c.models = {dgp::CovariateModel::spiked};
      c.estimators.clear();
      break;
  }
  return c;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "experiment", "grid",  "models", "trials", "draws",      "estimators",       "seed",
      "rank_tol",   "p",     "n",      "sigma",  "beta0",      "n_over_p",         "covariates",
      "threads",    "paper_scale",     "max_failure_rate"};
  if (!j.is_object()) throw InvalidInputError("experiment config must be a JSON object");
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw InvalidInputError("experiment config: unknown key '" + item.key() + "'");
    }
  }
  if (!j.contains("experiment")) throw InvalidInputError("experiment config: 'experiment' missing");
  try {
    const bool paper = j.value("paper_scale", false);
    ExperimentConfig c =
        default_config(parse_experiment(j.at("experiment").get<std::string>()), paper);
    if (j.contains("grid")) c.grid = j.at("grid").get<std::vector<double>>();
    if (j.contains("models")) {
      c.models.clear();
      for (const auto& m : j.at("models")) c.models.push_back(dgp::parse_model(m.get<std::string>()));
    }
    if (j.contains("trials")) c.trials = j.at("trials").get<std::size_t>();
    if (j.contains("draws")) c.draws = j.at("draws").get<std::size_t>();
    if (j.contains("estimators")) {
      c.estimators.clear();
      for (const auto& e : j.at("estimators")) c.estimators.push_back(parse_estimator(e.get<std::string>()));
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("rank_tol")) c.tol = RankTolerance(j.at("rank_tol").get<double>());
    if (j.contains("p")) c.p = j.at("p").get<std::size_t>();
    if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
    if (j.contains("sigma")) c.sigma = j.at("sigma").get<double>();
    if (j.contains("beta0")) c.beta0 = j.at("beta0").get<double>();
    if (j.contains("n_over_p")) c.n_over_p = j.at("n_over_p").get<double>();
    if (j.contains("threads")) c.threads = j.at("threads").get<std::size_t>();
    if (j.contains("max_failure_rate")) c.max_failure_rate = j.at("max_failure_rate").get<double>();
    if (j.contains("covariates")) {
      nlohmann::json cov = j.at("covariates");
      // model and dimensions come from the experiment
      for (const char* key : {"model", "n", "q"}) {
        if (cov.contains(key)) {
          throw InvalidInputError(std::string("experiment config: covariates.") + key +
                                  " is set per cell and cannot be given");
        }
      }
      c.covariates = dgp::covariate_config_from_json(cov);
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("experiment config: ") + e.what());
  }
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json models = nlohmann::json::array();
  for (const auto m : c.models) models.push_back(std::string(dgp::to_string(m)));
  nlohmann::json ests = nlohmann::json::array();
  for (const auto e : c.estimators) ests.push_back(std::string(to_string(e)));
  nlohmann::json cov = dgp::to_json(c.covariates);
  cov.erase("model");
  cov.erase("n");
  cov.erase("q");
  nlohmann::json j = {{"experiment", std::string(to_string(c.experiment))},
                      {"grid", c.grid},
                      {"models", models},
                      {"trials", c.trials},
                      {"draws", c.draws},
                      {"estimators", ests},
                      {"seed", c.seed},
                      {"p", c.p},
                      {"n", c.n},
                      {"sigma", c.sigma},
                      {"beta0", c.beta0},
                      {"n_over_p", c.n_over_p},
                      {"covariates", cov},
                      {"max_failure_rate", c.max_failure_rate}};
  if (!c.tol.is_default()) j["rank_tol"] = c.tol.relative(1, 1);
  return j;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) { return run(cfg); }

ExperimentReport run_ate(const ExperimentConfig& cfg) {
  if (cfg.experiment != Experiment::ate) {
    throw InvalidInputError("run_ate needs experiment = ate");
  }
  return run(cfg);
}

TrialDesign trial_design(const ExperimentConfig& cfg, dgp::CovariateModel model,
                         std::size_t grid_index, std::size_t trial) {
  cfg.validate();
  if (grid_index >= cfg.grid.size() || trial >= cfg.trials) {
    throw InvalidInputError("trial_design: grid index or trial out of range");
  }
  TrialDesign out;
  if (cfg.experiment == Experiment::ate) {
    dgp::Rng rng = dgp::Rng::stream(cfg.seed, trial_stream(dgp::CovariateModel::spiked,
                                                           grid_index, trial));
    dgp::AteDesign design = dgp::gen_ate_design(ate_params(cfg), rng, cfg.tol);
    out.t = design.t();
    out.w = std::move(design.w);
    out.rejections = design.rejections;
    return out;
  }
  const CellDims dims = cell_dims(cfg, cfg.grid[grid_index]);
  dgp::Rng rng = dgp::Rng::stream(cfg.seed, trial_stream(model, grid_index, trial));
  dgp::CovariateDraw draw = draw_covariates(cfg, model, dims, rng);
  out.w = std::move(draw.w);
  out.t = Matrix::Ones(out.w.rows(), 1);
  out.rejections = draw.rejections;
  return out;
}

std::uint64_t trial_stream(dgp::CovariateModel model, std::size_t grid_index, std::size_t trial) {
  return (static_cast<std::uint64_t>(model) << 48) |
         (static_cast<std::uint64_t>(grid_index & 0xFFFF) << 32) |
         static_cast<std::uint64_t>(trial & 0xFFFFFFFFULL);
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PREGOLS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw InvalidInputError(std::string("PREGOLS_THREADS must be a positive integer, got '") +
                            env + "'");
  }
  return hw;
}

double pairwise_sum(const std::vector<double>& values) {
  struct Rec {
    static double sum(const double* p, std::size_t n) {
      if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += p[i];
        return s;
      }
      const std::size_t h = n / 2;
      return sum(p, h) + sum(p + h, n - h);
    }
  };
  return Rec::sum(values.data(), values.size());
}

MeanSe mean_and_se(const std::vector<double>& values) {
  MeanSe out;
  const std::size_t n = values.size();
  if (n == 0) return out;
  out.mean = pairwise_sum(values) / static_cast<double>(n);
  if (n < 2) return out;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (values[i] - out.mean) * (values[i] - out.mean);
  const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
  out.std_error = std::sqrt(var / static_cast<double>(n));
  return out;
}

std::string report_csv(const ExperimentReport& report, bool include_w, bool supplementary) {
  std::ostringstream o;
  o << "experiment,model,grid_value,estimator,mean_bias,std_error,trials,draws,failures,seed\n";
  for (const auto& c : report.cells) {
    const bool is_w = c.estimator == "w";
    const bool in_main = include_w || !is_w;
    if (supplementary ? in_main : !in_main) continue;
    o << to_string(c.experiment) << ',' << dgp::to_string(c.model) << ',' << fmt(c.grid_value)
      << ',' << c.estimator << ',' << fmt(c.mean_bias) << ',' << fmt(c.std_error) << ','
      << c.trials << ',' << c.draws << ',' << c.failures << ',' << c.seed << '\n';
  }
  return o.str();
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir,
                  bool include_w) {
  if (report.cells.empty()) throw InvalidInputError("refusing to write an empty report");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  write_text(dir / "report.csv", report_csv(report, include_w, false));
  const bool has_w = std::any_of(report.cells.begin(), report.cells.end(),
                                 [](const CellResult& c) { return c.estimator == "w"; });
  if (has_w && !include_w) {
    write_text(dir / "report_supplementary.csv", report_csv(report, false, true));
  }

  const auto exp = std::string(to_string(report.config.experiment));
  for (const auto model : report.config.models) {
    svg::ChartSpec spec;
    spec.title = exp + ", " + std::string(dgp::to_string(model)) + " model";
    spec.x_label = x_label(report.config.experiment);
    spec.y_label = report.config.experiment == Experiment::ate ? "mean bias of D coefficient"
                                                               : "mean bias of sigma^2 estimate";
    std::vector<std::string> order;
    for (const auto& c : report.cells) {
      if (c.model != model || (c.estimator == "w" && !include_w)) continue;
      if (std::find(order.begin(), order.end(), c.estimator) == order.end()) {
        order.push_back(c.estimator);
      }
    }
    for (const auto& name : order) {
      svg::Series s;
      s.name = name;
      for (const auto& c : report.cells) {
        if (c.model != model || c.estimator != name) continue;
        s.x.push_back(c.grid_value);
        s.y.push_back(c.mean_bias);
        s.band.push_back(c.std_error);
      }
      spec.series.push_back(std::move(s));
    }
    write_text(dir / (exp + "_" + std::string(dgp::to_string(model)) + ".svg"),
               svg::line_chart(spec));
  }
}

}  // namespace pregols::sim
