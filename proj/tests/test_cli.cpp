#include "oracles.hpp"

#include "cli.hpp"
#include "pregols/csv.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using pregols::Matrix;
using pregols::Vector;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "pregols");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = pregols::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
public:
  TempDir() : path_(fs::temp_directory_path() / ("pregols_cli_" + std::to_string(counter_++))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const Matrix& m) const {
    pregols::csv::write_matrix(path_ / name, m);
    return (path_ / name).string();
  }
  std::string file(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return (path_ / name).string();
  }
  fs::path operator/(const std::string& s) const { return path_ / s; }

private:
  static inline int counter_ = 0;
  fs::path path_;
};

Matrix col(std::initializer_list<double> xs) {
  Matrix m(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}

std::vector<std::vector<std::string>> rows(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    out.push_back(cells);
  }
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("fit on the 2x3 example") {
  TempDir dir;
  Matrix w(2, 3);
  w << 1, 0, 0, 0, 1, 0;
  const auto wp = dir.write("w.csv", w);
  const auto tp = dir.write("t.csv", Matrix::Ones(2, 1));
  const auto yp = dir.write("y.csv", col({1, 2}));
  for (const char* variant : {"eq5", "remark1", "prep1", "prep2"}) {
    const Result r = invoke({"fit", "--w", wp, "--t", tp, "--y", yp, "--variant", variant});
    REQUIRE(r.code == 0);
    const auto cells = rows(r.out);
    REQUIRE(cells.size() == 5);
    CHECK(cells[0] == std::vector<std::string>{"block", "index", "value"});
    CHECK(cells[1][0] == "lambda");
    CHECK(std::stod(cells[1][2]) == doctest::Approx(-0.5));
    CHECK(std::stod(cells[2][2]) == doctest::Approx(0.5));
    CHECK(std::abs(std::stod(cells[3][2])) < 1e-15);
    CHECK(cells[4][0] == "tau");
    CHECK(std::stod(cells[4][2]) == doctest::Approx(1.5));
  }
  const Result full = invoke({"fit", "--w", wp, "--t", tp, "--y", yp, "--full"});
  REQUIRE(full.code == 0);
  CHECK(rows(full.out).size() == 5);
  CHECK(rows(full.out)[1][0] == "beta");
}

TEST_CASE("exit codes") {
  TempDir dir;
  Matrix w(2, 3);
  w << 1, 2, 3, 2, 4, 6;
  const auto wp = dir.write("w.csv", w);
  const auto tp = dir.write("t.csv", Matrix::Ones(2, 1));
  const auto yp = dir.write("y.csv", col({1, 2}));
  const Result rank = invoke({"fit", "--w", wp, "--t", tp, "--y", yp});
  CHECK(rank.code == 2);
  CHECK(rank.err.find("A1") != std::string::npos);

  CHECK(invoke({"fit", "--w", wp, "--y", yp, "--bogus"}).code == 1);
  CHECK(invoke({"fit", "--w", (dir / "missing.csv").string(), "--y", yp}).code == 1);
  CHECK(invoke({"frobnicate"}).code == 1);
  CHECK(invoke({"--help"}).code == 0);
  const auto bad = dir.file("bad.csv", "1,x\n");
  CHECK(invoke({"fit", "--w", bad, "--y", yp}).code == 1);
  CHECK(invoke({"fit", "--w", wp, "--t", tp, "--y", yp, "--variant", "eq6"}).code == 1);
}

TEST_CASE("loo with the oracle check") {
  TempDir dir;
  std::mt19937_64 rng(40);
  auto [w, t] = oracle::random_blocks(8, 14, 1, rng);
  const auto wp = dir.write("w.csv", w);
  const auto tp = dir.write("t.csv", t);
  const auto yp = dir.write("y.csv", oracle::gaussian_vec(8, rng));
  const Result r = invoke({"loo", "--w", wp, "--t", tp, "--y", yp, "--check-oracle", "--out",
                           (dir / "out").string()});
  CHECK(r.code == 0);
  const auto cells = rows(r.out);
  REQUIRE(cells.size() == 9);
  CHECK(cells[0] == std::vector<std::string>{"index", "residual", "residual_full", "tau_0",
                                             "coef_gap", "residual_gap", "residual_full_gap"});
  for (std::size_t i = 1; i < cells.size(); ++i) CHECK(std::stod(cells[i][4]) < 1e-6);
  CHECK(fs::exists(dir / "out" / "lambda_loo.csv"));
  CHECK(pregols::csv::read_matrix(dir / "out" / "tau_loo.csv").rows() == 8);

  const Result one = invoke({"loo", "--w", wp, "--t", tp, "--y", yp, "--index", "3"});
  CHECK(one.code == 0);
  CHECK(rows(one.out).size() == 2);
  CHECK(rows(one.out)[1][1] == cells[4][1]);

  // an impossible tolerance forces the mismatch code
  const Result strict = invoke({"loo", "--w", wp, "--t", tp, "--y", yp, "--check-oracle",
                                "--oracle-tol", "1e-300"});
  CHECK(strict.code == 3);
}

TEST_CASE("loo rank violation") {
  TempDir dir;
  std::mt19937_64 rng(41);
  Matrix t = Matrix::Ones(6, 2);
  t.col(0).setZero();
  t(0, 0) = 1.0;
  const Result r = invoke({"loo", "--w", dir.write("w.csv", oracle::gaussian(6, 10, rng)), "--t",
                           dir.write("t.csv", t), "--y",
                           dir.write("y.csv", oracle::gaussian_vec(6, rng))});
  CHECK(r.code == 2);
}

TEST_CASE("cochran JSON") {
  TempDir dir;
  std::mt19937_64 rng(42);
  Matrix t = Matrix::Ones(10, 2);
  for (int i = 0; i < 10; ++i) t(i, 0) = i % 2;
  const Result r = invoke({"cochran", "--z", dir.write("z.csv", oracle::gaussian(10, 16, rng)),
                           "--u", dir.write("u.csv", oracle::gaussian(10, 2, rng)), "--t",
                           dir.write("t.csv", t), "--y",
                           dir.write("y.csv", oracle::gaussian_vec(10, rng)), "--perturb-seed", "3"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("image_gap").get<double>() < 1e-8);
  CHECK(j.at("coeff_gap").get<double>() < 1e-8);
  CHECK(j.at("perturbed_image_gap").get<double>() < 1e-8);
  CHECK(j.at("long").at("gamma").size() == 2);
  CHECK(j.at("ovb").at("decomposition_gap").get<double>() < 1e-8);
}

TEST_CASE("variance JSON") {
  TempDir dir;
  std::mt19937_64 rng(43);
  const Matrix w = oracle::gaussian(8, 12, rng);
  const auto wp = dir.write("w.csv", w);
  const auto tp = dir.write("t.csv", Matrix::Ones(8, 1));
  const auto yp = dir.write("y.csv", Vector::Constant(8, 2.0));
  const Result one = invoke({"variance", "--w", wp, "--t", tp, "--y", yp, "--estimator", "w"});
  REQUIRE(one.code == 0);
  const json j = json::parse(one.out);
  CHECK(j.at("estimator") == "w");
  CHECK(j.at("estimate").get<double>() == doctest::Approx(32.0));
  CHECK(!j.contains("expected_bias"));

  const auto bp = dir.write("beta.csv", Matrix::Zero(13, 1));
  const Result all = invoke({"variance", "--w", wp, "--t", tp, "--y", yp, "--truth", bp,
                             "--sigma2", "2"});
  REQUIRE(all.code == 0);
  const json arr = json::parse(all.out);
  REQUIRE(arr.size() == 4);
  for (const auto& e : arr) CHECK(e.at("expected_bias").get<double>() == 0.0);
  CHECK(arr[3].contains("alt_denominator"));
  CHECK(invoke({"variance", "--w", wp, "--t", tp, "--y", yp, "--estimator", "ols"}).code == 1);
  CHECK(invoke({"variance", "--w", wp, "--t", tp, "--y", yp, "--sigma2", "2"}).code == 1);
}

TEST_CASE("simulate writes its outputs") {
  TempDir dir;
  const auto cfg = dir.file("cfg.json", R"({"experiment": "sim3", "grid": [1, 2], "p": 14,
      "n": 8, "models": ["geometric"], "trials": 3, "draws": 2, "seed": 77})");
  const Result r = invoke({"simulate", "--config", cfg, "--out", (dir / "out").string(),
                           "--dump-dir", (dir / "dump").string(), "--threads", "2"});
  REQUIRE(r.code == 0);
  CHECK(rows(r.out).size() == 1 + 2 * 3);
  CHECK(fs::exists(dir / "out" / "report.csv"));
  CHECK(fs::exists(dir / "out" / "report_supplementary.csv"));
  CHECK(fs::exists(dir / "out" / "sim3_geometric.svg"));
  CHECK(fs::exists(dir / "dump" / "sim3_geometric_grid1_w.csv"));
  CHECK(r.err.find("0 failed trials") != std::string::npos);
  std::ifstream in(dir / "out" / "config.json");
  const json written = json::parse(in);
  CHECK(written.at("seed") == 77);

  const Result again = invoke({"simulate", "--config", (dir / "out" / "config.json").string(),
                               "--out", (dir / "again").string(), "--threads", "1"});
  REQUIRE(again.code == 0);
  CHECK(again.out == r.out);

  CHECK(invoke({"simulate", "--config", cfg, "--experiment", "sim1", "--out",
                (dir / "x").string()})
            .code == 1);
  CHECK(invoke({"simulate", "--experiment", "sim9", "--out", (dir / "x").string()}).code == 1);
}

}  // TEST_SUITE
