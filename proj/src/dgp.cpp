#include "pregols/dgp.hpp"

#include "pregols/errors.hpp"

#include <cmath>
#include <set>
#include <string>

namespace pregols::dgp {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t root, std::uint64_t k) noexcept {
  return mix64(root ^ mix64(k + 0x9E3779B97F4A7C15ULL));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (cached_) {
    const double v = *cached_;
    cached_.reset();
    return v;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_ = v * f;
  return u * f;
}

Vector Rng::normal_vector(Eigen::Index size) {
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = normal();
  return v;
}

Matrix Rng::normal_matrix(Eigen::Index rows, Eigen::Index cols) {
  // row-major fill order, independent of storage
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal();
  return m;
}

std::string_view to_string(CovariateModel m) {
  switch (m) {
    case CovariateModel::standard_normal:
      return "standard_normal";
    case CovariateModel::spiked:
      return "spiked";
    case CovariateModel::geometric:
      return "geometric";
  }
  return "?";
}

CovariateModel parse_model(std::string_view name) {
  if (name == "standard_normal" || name == "normal") return CovariateModel::standard_normal;
  if (name == "spiked") return CovariateModel::spiked;
  if (name == "geometric") return CovariateModel::geometric;
  throw InvalidInputError("unknown covariate model '" + std::string(name) +
                          "' (expected normal, spiked or geometric)");
}

void CovariateConfig::validate() const {
  if (n == 0) throw InvalidInputError("covariate config: n must be positive");
  if (q < n) {
    throw InvalidInputError("covariate config: need q >= n, got n = " + std::to_string(n) +
                            ", q = " + std::to_string(q));
  }
  if (!(sigma_x > 0.0) || !std::isfinite(sigma_x)) {
    throw InvalidInputError("covariate config: sigma_x must be positive");
  }
  if (!(lambda_lo >= 0.0) || !(lambda_hi >= lambda_lo) || !std::isfinite(lambda_hi)) {
    throw InvalidInputError("covariate config: lambda_range must satisfy 0 <= lo <= hi");
  }
  if (k_spikes > q) throw InvalidInputError("covariate config: k_spikes exceeds q");
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidInputError("covariate config: rho must lie in (0, 1)");
  if (!(lambda_geo > 0.0) || !std::isfinite(lambda_geo)) {
    throw InvalidInputError("covariate config: lambda_geo must be positive");
  }
}

CovariateConfig covariate_config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {"model",   "n",           "q",          "sigma_x",
                                              "k_spikes", "lambda_range", "lambda_geo", "rho"};
  if (!j.is_object()) throw InvalidInputError("covariate config must be a JSON object");
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw InvalidInputError("covariate config: unknown key '" + item.key() + "'");
    }
  }
  CovariateConfig c;
  try {
    if (j.contains("model")) c.model = parse_model(j.at("model").get<std::string>());
    if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
    if (j.contains("q")) c.q = j.at("q").get<std::size_t>();
    if (j.contains("sigma_x")) c.sigma_x = j.at("sigma_x").get<double>();
    if (j.contains("k_spikes")) c.k_spikes = j.at("k_spikes").get<std::size_t>();
    if (j.contains("lambda_range")) {
      const auto& r = j.at("lambda_range");
      if (!r.is_array() || r.size() != 2) {
        throw InvalidInputError("covariate config: lambda_range must be [lo, hi]");
      }
      c.lambda_lo = r[0].get<double>();
      c.lambda_hi = r[1].get<double>();
    }
    if (j.contains("lambda_geo")) c.lambda_geo = j.at("lambda_geo").get<double>();
    if (j.contains("rho")) c.rho = j.at("rho").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInputError(std::string("covariate config: ") + e.what());
  }
  return c;
}

nlohmann::json to_json(const CovariateConfig& c) {
  return {{"model", std::string(to_string(c.model))},
          {"n", c.n},
          {"q", c.q},
          {"sigma_x", c.sigma_x},
          {"k_spikes", c.k_spikes},
          {"lambda_range", {c.lambda_lo, c.lambda_hi}},
          {"lambda_geo", c.lambda_geo},
          {"rho", c.rho}};
}

Matrix orthonormal_rows(std::size_t n, std::size_t q, Rng& rng) {
  if (n > q) {
    throw InvalidInputError("orthonormal_rows: need n <= q, got n = " + std::to_string(n) +
                            ", q = " + std::to_string(q));
  }
  const auto rows = static_cast<Eigen::Index>(q);
  const auto cols = static_cast<Eigen::Index>(n);
  const Eigen::MatrixXd g = rng.normal_matrix(rows, cols);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd qm = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (r(j, j) < 0.0) qm.col(j) *= -1.0;
  }
  return qm.transpose();
}

SpikedCovariance gen_spiked_covariance(const CovariateConfig& cfg, Rng& rng) {
  const auto q = static_cast<Eigen::Index>(cfg.q);
  const auto k = static_cast<Eigen::Index>(cfg.k_spikes);
  SpikedCovariance out;
  out.lambdas.resize(k);
  out.directions.resize(q, k);
  Matrix inner = Matrix::Identity(q, q);
  for (Eigen::Index l = 0; l < k; ++l) {
    out.lambdas(l) = rng.uniform(cfg.lambda_lo, cfg.lambda_hi);
    Vector v = rng.normal_vector(q);
    v /= v.norm();
    out.directions.col(l) = v;
    inner.noalias() += out.lambdas(l) * v * v.transpose();
  }
  const double s2 = cfg.sigma_x * cfg.sigma_x;
  out.sigma = s2 * 0.5 * (inner + inner.transpose());

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(out.sigma));
  if (eig.info() != Eigen::Success) throw Error("spiked covariance: eigendecomposition failed");
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  out.sqrt_sigma = eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
  return out;
}

Matrix gen_covariates(const CovariateConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(cfg.n);
  const auto q = static_cast<Eigen::Index>(cfg.q);
  switch (cfg.model) {
    case CovariateModel::standard_normal:
      return rng.normal_matrix(n, q);
    case CovariateModel::spiked: {
      const Matrix u = orthonormal_rows(cfg.n, cfg.q, rng);
      const SpikedCovariance cov = gen_spiked_covariance(cfg, rng);
      return u * cov.sqrt_sigma;
    }
    case CovariateModel::geometric: {
      const Matrix u = orthonormal_rows(cfg.n, cfg.q, rng);
      const Matrix v = orthonormal_rows(cfg.q, cfg.q, rng);
      Vector s(q);
      for (Eigen::Index l = 0; l < q; ++l) {
        s(l) = cfg.lambda_geo * std::pow(cfg.rho, 0.5 * static_cast<double>(l + 1));
      }
      return u * s.asDiagonal() * v.transpose();
    }
  }
  throw InvalidInputError("unknown covariate model");
}

CovariateDraw gen_covariates_full_rank(const CovariateConfig& cfg, Rng& rng,
                                       const RankTolerance& tol, std::size_t max_attempts) {
  CovariateDraw out;
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    out.w = gen_covariates(cfg, rng);
    if (numeric_rank(out.w, tol) == cfg.n) return out;
    ++out.rejections;
  }
  throw AssumptionError("A1", "no full-row-rank " + std::string(to_string(cfg.model)) +
                                  " draw in " + std::to_string(max_attempts) + " attempts");
}

Vector gen_response(const Eigen::Ref<const Matrix>& w, const Eigen::Ref<const Vector>& beta1,
                    double beta0, double sigma, Rng& rng) {
  if (beta1.size() != w.cols()) {
    throw DimensionError("beta1 has length " + std::to_string(beta1.size()) + ", W has " +
                         std::to_string(w.cols()) + " columns");
  }
  if (!(sigma >= 0.0)) throw InvalidInputError("noise scale must be non-negative");
  Vector y = w * beta1;
  y.array() += beta0;
  if (sigma > 0.0) y += sigma * rng.normal_vector(w.rows());
  return y;
}

Vector default_beta1(std::size_t q, std::size_t p) {
  return Vector::Constant(static_cast<Eigen::Index>(q), 1.0 / std::sqrt(static_cast<double>(p)));
}

Matrix AteDesign::t() const {
  Matrix t(d.size(), 2);
  t.col(0) = d;
  t.col(1).setOnes();
  return t;
}

Matrix AteDesign::x() const { return hstack(w, t()); }

AteDesign gen_ate_design(const AteParams& params, Rng& rng, const RankTolerance& tol) {
  if (params.n >= params.q) {
    throw InvalidInputError("ATE design: need n < q, got n = " + std::to_string(params.n) +
                            ", q = " + std::to_string(params.q));
  }
  if (params.n < 3) throw InvalidInputError("ATE design: need n >= 3");
  CovariateConfig cfg = params.covariates;
  cfg.n = params.n;
  cfg.q = params.q;
  const auto n = static_cast<Eigen::Index>(params.n);

  AteDesign out;
  constexpr std::size_t kMaxAttempts = 100;
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    out.w = gen_covariates(cfg, rng);
    out.d.resize(n);
    bool constant = true;
    for (std::size_t redraw = 0; redraw < kMaxAttempts && constant; ++redraw) {
      for (Eigen::Index i = 0; i < n; ++i) out.d(i) = rng.bernoulli(params.treat_prob) ? 1.0 : 0.0;
      constant = out.d.minCoeff() == out.d.maxCoeff();
      if (constant) ++out.rejections;
    }
    if (!constant && numeric_rank(out.w, tol) == params.n && numeric_rank(out.t(), tol) == 2 &&
        numeric_rank(out.x(), tol) == params.n) {
      return out;
    }
    ++out.rejections;
  }
  throw AssumptionError("A2", "no valid ATE design in " + std::to_string(kMaxAttempts) +
                                  " attempts");
}

Vector ate_mean(const AteDesign& design, const AteParams& params, double tau) {
  Vector mu = design.w * params.alpha() + tau * design.d;
  mu.array() += params.alpha0;
  return mu;
}

Vector gen_ate_response(const AteDesign& design, const AteParams& params, double tau, Rng& rng) {
  Vector y = ate_mean(design, params, tau);
  if (params.sigma > 0.0) y += params.sigma * rng.normal_vector(y.size());
  return y;
}

AteDataset gen_ate_dataset(const AteParams& params, double tau, Rng& rng,
                           const RankTolerance& tol) {
  AteDataset out;
  out.design = gen_ate_design(params, rng, tol);
  out.y = gen_ate_response(out.design, params, tau, rng);
  return out;
}

}  // namespace pregols::dgp
