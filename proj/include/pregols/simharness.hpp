#pragma once

// Monte-Carlo bias experiments. Each trial draws one design from its own
// derived stream and then a batch of responses on that fixed design; a
// trial's bias is the mean over its draws, and a cell reports the mean and
// standard error of the trial biases.

#include "pregols/dgp.hpp"
#include "pregols/variance.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace pregols::sim {

enum class Experiment { sim1, sim2, sim3, sim4, ate };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view name);

struct ExperimentConfig {
  Experiment experiment = Experiment::sim1;
  std::vector<double> grid;
  std::vector<dgp::CovariateModel> models;
  std::size_t trials = 25;
  std::size_t draws = 25;
  std::vector<Estimator> estimators;  // ignored for ate
  std::uint64_t seed = 0;
  RankTolerance tol;

  // Fixed parts of the data-generating process. Grid values override the
  // matching field per cell.
  std::size_t p = 100;
  std::size_t n = 80;
  double sigma = 1.0;
  double beta0 = 1.0;
  double n_over_p = 0.8;
  dgp::CovariateConfig covariates;  // model, n and q are set per cell

  double max_failure_rate = 0.05;
  std::size_t threads = 0;  // 0: PREGOLS_THREADS, else hardware concurrency

  void validate() const;
};

/// Grid, models and estimators of the named experiment. Desk profile is
/// 25 trials x 25 draws; paper scale is 100 x 100.
ExperimentConfig default_config(Experiment e, bool paper_scale = false);

/// Fields of ExperimentConfig by name; "experiment" is required, everything
/// else defaults through default_config. "paper_scale": true selects 100 x 100.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);

struct CellResult {
  Experiment experiment = Experiment::sim1;
  dgp::CovariateModel model = dgp::CovariateModel::standard_normal;
  double grid_value = 0.0;
  std::string estimator;
  double mean_bias = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;  // configured trials; trials - failures succeeded
  std::size_t draws = 0;
  std::size_t failures = 0;
  std::uint64_t seed = 0;
  /// Mean over successful trials of the exact bias on each trial's design.
  double mean_expected_bias = 0.0;
  std::vector<double> trial_biases;
  std::vector<std::string> failure_reasons;
  std::size_t rejections = 0;  // rank rejections while drawing designs
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<CellResult> cells;  // model-major, then grid, then estimator
};

/// Dispatches on cfg.experiment (ate goes to run_ate). Throws
/// AssumptionError when a cell loses more than max_failure_rate of its trials.
ExperimentReport run_experiment(const ExperimentConfig& cfg);
ExperimentReport run_ate(const ExperimentConfig& cfg);

/// The design drawn by a trial (W and T = 1 for sims, W and T = [D, 1] for
/// ate), regenerated from the trial's stream.
struct TrialDesign {
  Matrix w;
  Matrix t;
  std::size_t rejections = 0;
};
TrialDesign trial_design(const ExperimentConfig& cfg, dgp::CovariateModel model,
                         std::size_t grid_index, std::size_t trial);

/// Stream index of a trial: model in bits 48+, grid index in bits 32-47,
/// trial in the low 32 bits.
std::uint64_t trial_stream(dgp::CovariateModel model, std::size_t grid_index, std::size_t trial);

/// Worker count: cfg value when positive, else PREGOLS_THREADS, else all cores.
std::size_t resolve_threads(std::size_t requested);

/// Pairwise summation; the result depends only on the order of values.
double pairwise_sum(const std::vector<double>& values);

struct MeanSe {
  double mean = 0.0;
  double std_error = 0.0;
};
/// Mean and sample-sd / sqrt(count); std_error is 0 for fewer than two values.
MeanSe mean_and_se(const std::vector<double>& values);

/// Writes report.csv, report_supplementary.csv (w rows unless include_w
/// merges them) and one SVG per model into dir.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir,
                  bool include_w = false);

/// The CSV text write_report would produce, for callers that want it in memory.
std::string report_csv(const ExperimentReport& report, bool include_w, bool supplementary);

}  // namespace pregols::sim
