#include "oracles.hpp"

#include "pregols/dgp.hpp"
#include "pregols/errors.hpp"

#include <doctest.h>
#include <json.hpp>

#include <set>

using namespace pregols;
using namespace pregols::dgp;

namespace {

CovariateConfig config(CovariateModel m, std::size_t n, std::size_t q) {
  CovariateConfig c;
  c.model = m;
  c.n = n;
  c.q = q;
  return c;
}

Vector singular_values_of(const Matrix& w) {
  return Eigen::JacobiSVD<Matrix>(w).singularValues();
}

}  // namespace

TEST_SUITE("dgp") {

TEST_CASE("seed streams") {
  CHECK(mix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(stream_seed(1, 2) == stream_seed(1, 2));
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(stream_seed(42, k));
  CHECK(seen.size() == 1000);
  CHECK(stream_seed(42, 0) != stream_seed(43, 0));

  Rng a = Rng::stream(7, 3), b = Rng::stream(7, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
}

TEST_CASE("uniform and normal moments") {
  Rng rng(11);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, sn4 = 0;
  double umin = 1, umax = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    sn4 += z * z * z * z;
  }
  CHECK(umin >= 0.0);
  CHECK(umax < 1.0);
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(sn / n) < 4.0 / std::sqrt(n));
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sn4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("model names") {
  CHECK(parse_model("normal") == CovariateModel::standard_normal);
  for (auto m : {CovariateModel::standard_normal, CovariateModel::spiked, CovariateModel::geometric})
    CHECK(parse_model(to_string(m)) == m);
  CHECK_THROWS_AS(parse_model("cauchy"), InvalidInputError);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config(CovariateModel::spiked, 10, 5).validate(), InvalidInputError);
  CovariateConfig c = config(CovariateModel::geometric, 5, 10);
  CHECK_NOTHROW(c.validate());
  c.rho = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidInputError);
  c = config(CovariateModel::spiked, 5, 10);
  c.sigma_x = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidInputError);
}

TEST_CASE("orthonormal rows") {
  Rng rng(1);
  const Matrix u = orthonormal_rows(6, 15, rng);
  CHECK(oracle::max_abs(u * u.transpose() - Matrix::Identity(6, 6)) < 1e-10);
  const Matrix sq = orthonormal_rows(8, 8, rng);
  CHECK(std::abs(std::abs(sq.determinant()) - 1.0) < 1e-8);
  CHECK_THROWS_AS(orthonormal_rows(9, 8, rng), InvalidInputError);

  double sum = 0.0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) sum += orthonormal_rows(4, 10, rng).squaredNorm() / 40.0;
  CHECK(sum / reps == doctest::Approx(0.1).epsilon(0.05));
  // entry-level check: mean square of one fixed entry
  double e00 = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double v = orthonormal_rows(4, 10, rng)(0, 3);
    e00 += v * v;
  }
  CHECK(e00 / reps == doctest::Approx(0.1).epsilon(0.15));
}

TEST_CASE("spiked with no spikes is a scaled orthonormal-row matrix") {
  Rng rng(2);
  CovariateConfig c = config(CovariateModel::spiked, 7, 12);
  c.k_spikes = 0;
  c.sigma_x = 1.7;
  const Matrix w = gen_covariates(c, rng);
  CHECK(oracle::max_abs(w * w.transpose() - 1.7 * 1.7 * Matrix::Identity(7, 7)) < 1e-8);
}

TEST_CASE("spiked covariance structure") {
  Rng rng(3);
  CovariateConfig c = config(CovariateModel::spiked, 20, 30);
  const SpikedCovariance s = gen_spiked_covariance(c, rng);
  CHECK(s.lambdas.size() == 5);
  CHECK(s.lambdas.minCoeff() >= 10.0);
  CHECK(s.lambdas.maxCoeff() <= 20.0);
  for (Eigen::Index l = 0; l < 5; ++l) CHECK(s.directions.col(l).norm() == doctest::Approx(1.0));
  CHECK(oracle::max_abs(s.sqrt_sigma * s.sqrt_sigma - s.sigma) < 1e-10);
  CHECK(oracle::max_abs(s.sigma - s.sigma.transpose()) == 0.0);
  CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(s.sigma).eigenvalues().minCoeff() > 0.0);
  Matrix direct = Matrix::Identity(30, 30);
  for (Eigen::Index l = 0; l < 5; ++l)
    direct += s.lambdas(l) * s.directions.col(l) * s.directions.col(l).transpose();
  CHECK(oracle::max_abs(direct - s.sigma) < 1e-12);
}

TEST_CASE("spiked spectrum has k large eigenvalues") {
  Rng rng(4);
  const CovariateConfig c = config(CovariateModel::spiked, 80, 100);
  double count = 0.0;
  const int reps = 20;
  for (int r = 0; r < reps; ++r) {
    const Matrix w = gen_covariates(c, rng);
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(w * w.transpose()).eigenvalues();
    count += static_cast<double>((ev.array() > 5.0).count());
  }
  CHECK(count / reps == doctest::Approx(5.0).epsilon(0.05));
}

TEST_CASE("geometric singular values") {
  Rng rng(5);
  CovariateConfig c = config(CovariateModel::geometric, 10, 10);
  c.lambda_geo = 2.0;
  c.rho = 0.8;
  const Vector sv = singular_values_of(gen_covariates(c, rng));
  for (Eigen::Index i = 0; i < 10; ++i)
    CHECK(std::abs(sv(i) - 2.0 * std::pow(0.8, 0.5 * static_cast<double>(i + 1))) < 1e-8);

  // wide case: interlacing bounds s_{i + q - n} <= sv_i <= s_i
  c.q = 25;
  const Vector wide = singular_values_of(gen_covariates(c, rng));
  for (Eigen::Index i = 0; i < 10; ++i) {
    const double hi = 2.0 * std::pow(0.8, 0.5 * static_cast<double>(i + 1));
    const double lo = 2.0 * std::pow(0.8, 0.5 * static_cast<double>(i + 1 + 15));
    CHECK(wide(i) <= hi + 1e-10);
    CHECK(wide(i) >= lo - 1e-10);
  }
}

TEST_CASE("full-rank draws for every model") {
  Rng rng(6);
  for (auto m : {CovariateModel::standard_normal, CovariateModel::spiked, CovariateModel::geometric}) {
    const CovariateDraw d = gen_covariates_full_rank(config(m, 20, 25), rng);
    CHECK(d.rejections == 0);
    CHECK(numeric_rank(d.w) == 20);
  }
}

TEST_CASE("determinism") {
  for (auto m : {CovariateModel::standard_normal, CovariateModel::spiked, CovariateModel::geometric}) {
    Rng a(99), b(99);
    const Matrix wa = gen_covariates(config(m, 6, 9), a);
    const Matrix wb = gen_covariates(config(m, 6, 9), b);
    CHECK((wa.array() == wb.array()).all());
  }
}

TEST_CASE("response") {
  Rng rng(7);
  std::mt19937_64 mt(1);
  const Matrix w = oracle::gaussian(5, 8, mt);
  const Vector b1 = default_beta1(8, 10);
  CHECK(b1.size() == 8);
  CHECK(b1(0) == doctest::Approx(1.0 / std::sqrt(10.0)));
  const Vector exact = gen_response(w, b1, 1.0, 0.0, rng);
  CHECK(oracle::max_abs(exact - w * b1 - Vector::Ones(5)) == 0.0);
  CHECK_THROWS_AS(gen_response(w, Vector::Ones(7), 1.0, 1.0, rng), DimensionError);
  CHECK_THROWS_AS(gen_response(w, b1, 1.0, -1.0, rng), InvalidInputError);

  Vector sum = Vector::Zero(5);
  const int draws = 10000;
  for (int k = 0; k < draws; ++k) sum += gen_response(w, b1, 1.0, 2.0, rng) - w * b1;
  sum /= draws;
  for (Eigen::Index i = 0; i < 5; ++i) CHECK(std::abs(sum(i) - 1.0) < 3.0 * 2.0 / 100.0);
}

TEST_CASE("ATE datasets") {
  Rng rng(8);
  AteParams p;
  const AteDataset ds = gen_ate_dataset(p, 2.0, rng);
  CHECK(ds.design.w.rows() == 80);
  CHECK(ds.design.w.cols() == 98);
  CHECK(p.p() == 100);
  for (Eigen::Index i = 0; i < 80; ++i) CHECK((ds.design.d(i) == 0.0 || ds.design.d(i) == 1.0));
  const Matrix t = ds.design.t();
  CHECK(t.cols() == 2);
  CHECK((t.col(1).array() == 1.0).all());
  CHECK(ds.design.x().cols() == 100);

  AteParams quiet = p;
  quiet.sigma = 0.0;
  const AteDesign design = gen_ate_design(quiet, rng);
  const Vector y0 = gen_ate_response(design, quiet, 0.0, rng);
  CHECK(oracle::max_abs(y0 - design.w * quiet.alpha() - Vector::Ones(80)) < 1e-14);
  const Vector y3 = ate_mean(design, quiet, 3.0);
  CHECK(oracle::max_abs(y3 - y0 - 3.0 * design.d) < 1e-14);

  int inside = 0;
  for (int r = 0; r < 200; ++r) {
    const double frac = gen_ate_design(p, rng).d.mean();
    inside += (frac >= 0.3 && frac <= 0.7) ? 1 : 0;
  }
  CHECK(inside >= 198);

  AteParams bad = p;
  bad.q = 70;
  CHECK_THROWS_AS(gen_ate_design(bad, rng), InvalidInputError);
}

TEST_CASE("config JSON") {
  const nlohmann::json j = {{"model", "geometric"}, {"n", 4}, {"q", 9},
                            {"lambda_geo", 3.0}, {"rho", 0.5}, {"lambda_range", {2.0, 4.0}}};
  const CovariateConfig c = covariate_config_from_json(j);
  CHECK(c.model == CovariateModel::geometric);
  CHECK(c.q == 9);
  CHECK(c.lambda_lo == 2.0);
  CHECK(c.lambda_hi == 4.0);
  const CovariateConfig back = covariate_config_from_json(to_json(c));
  CHECK(back.rho == 0.5);
  CHECK(back.lambda_geo == 3.0);
  CHECK(to_json(back) == to_json(c));
  CHECK_THROWS_AS(covariate_config_from_json({{"modle", "spiked"}}), InvalidInputError);
  CHECK_THROWS_AS(covariate_config_from_json({{"rho", "high"}}), InvalidInputError);
}

}  // TEST_SUITE
