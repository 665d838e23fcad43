#pragma once

// Seeded data generators: three covariate models, the Gauss-Markov response
// and the treatment-effect design.

#include "pregols/linalg.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include <json.hpp>

namespace pregols::dgp {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of stream k under root: mix64(root ^ mix64(k + 0x9E3779B97F4A7C15)).
/// Pure integer arithmetic, so identical on every platform.
std::uint64_t stream_seed(std::uint64_t root, std::uint64_t k) noexcept;

/// mt19937_64 with the float transforms fixed here rather than left to the
/// standard library's distributions, whose output is implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng stream(std::uint64_t root, std::uint64_t k) { return Rng(stream_seed(root, k)); }

  std::uint64_t next() { return engine_(); }
  /// [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Marsaglia polar method; the second variate of each pair is cached.
  double normal();
  bool bernoulli(double prob) { return uniform() < prob; }

  Vector normal_vector(Eigen::Index size);
  Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);

private:
  std::mt19937_64 engine_;
  std::optional<double> cached_;
};

enum class CovariateModel { standard_normal, spiked, geometric };

std::string_view to_string(CovariateModel m);
/// Accepts "standard_normal" (alias "normal"), "spiked", "geometric".
CovariateModel parse_model(std::string_view name);

struct CovariateConfig {
  CovariateModel model = CovariateModel::standard_normal;
  std::size_t n = 0;
  std::size_t q = 0;
  double sigma_x = 1.0;
  std::size_t k_spikes = 5;
  double lambda_lo = 10.0;
  double lambda_hi = 20.0;
  double lambda_geo = 1.0;
  double rho = 0.95;

  void validate() const;
};

/// Fields as above; missing keys keep their defaults, unknown keys are errors.
CovariateConfig covariate_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CovariateConfig& c);

/// n x q with orthonormal rows: QR of a q x n Gaussian draw, Q's columns
/// sign-fixed by diag(R), transposed.
Matrix orthonormal_rows(std::size_t n, std::size_t q, Rng& rng);

/// One draw of W. No rank check.
Matrix gen_covariates(const CovariateConfig& cfg, Rng& rng);

struct CovariateDraw {
  Matrix w;
  std::size_t rejections = 0;
};

/// Draws W until numeric_rank(W) = n. Throws AssumptionError("A1") after
/// max_attempts consecutive failures.
CovariateDraw gen_covariates_full_rank(const CovariateConfig& cfg, Rng& rng,
                                       const RankTolerance& tol = {},
                                       std::size_t max_attempts = 100);

/// sigma_x^2 (I + sum_l lambda_l v_l v_l^T) and its symmetric square root.
struct SpikedCovariance {
  Matrix sigma;
  Matrix sqrt_sigma;
  Vector lambdas;
  Matrix directions;  // q x k, unit columns
};
SpikedCovariance gen_spiked_covariance(const CovariateConfig& cfg, Rng& rng);

/// W beta1 + beta0 1 + sigma z.
Vector gen_response(const Eigen::Ref<const Matrix>& w, const Eigen::Ref<const Vector>& beta1,
                    double beta0, double sigma, Rng& rng);

/// beta1 = p^{-1/2} 1_q.
Vector default_beta1(std::size_t q, std::size_t p);

struct AteDesign {
  Matrix w;
  Vector d;
  std::size_t rejections = 0;

  Matrix t() const;  // [D, 1]
  Matrix x() const;  // [W, D, 1]
};

struct AteParams {
  std::size_t n = 80;
  std::size_t q = 98;  // p = q + 2
  double sigma = 1.0;
  double alpha0 = 1.0;
  double treat_prob = 0.5;
  CovariateConfig covariates{CovariateModel::spiked};

  std::size_t p() const noexcept { return q + 2; }
  Vector alpha() const { return default_beta1(q, p()); }
};

/// Spiked W and Bernoulli D. D is redrawn while constant, and the whole draw
/// is redrawn while W, T or X fails its rank condition.
AteDesign gen_ate_design(const AteParams& params, Rng& rng, const RankTolerance& tol = {});

/// W alpha + tau D + alpha0 1 (noise-free mean).
Vector ate_mean(const AteDesign& design, const AteParams& params, double tau);
Vector gen_ate_response(const AteDesign& design, const AteParams& params, double tau, Rng& rng);

struct AteDataset {
  AteDesign design;
  Vector y;
};
AteDataset gen_ate_dataset(const AteParams& params, double tau, Rng& rng,
                           const RankTolerance& tol = {});

}  // namespace pregols::dgp
