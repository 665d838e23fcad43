#include "oracles.hpp"

#include "pregols/csv.hpp"
#include "pregols/errors.hpp"
#include "pregols/linalg.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace pregols;

namespace {

// each residual relative to the largest singular value of the matrix it reproduces
double penrose_gap(const Matrix& m, const Matrix& mp) {
  const auto top = [](const Matrix& a) {
    return std::max(1e-300, Eigen::JacobiSVD<Matrix>(a).singularValues()(0));
  };
  const double g1 = oracle::max_abs(m * mp * m - m) / top(m);
  const double g2 = oracle::max_abs(mp * m * mp - mp) / top(mp);
  const Matrix a = m * mp, b = mp * m;
  const double g3 = oracle::max_abs(a - a.transpose());
  const double g4 = oracle::max_abs(b - b.transpose());
  return std::max({g1, g2, g3, g4});
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("pinv of the identity and of a diagonal") {
  CHECK(oracle::max_abs(pinv(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)) < 1e-15);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  const Matrix dp = pinv(d);
  CHECK(dp(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(dp(0, 1) == 0.0);
  CHECK(dp(1, 0) == 0.0);
  CHECK(dp(1, 1) == 0.0);
}

TEST_CASE("pinv satisfies the Penrose criteria on random shapes") {
  std::mt19937_64 rng(11);
  for (const auto& [r, c] : {std::pair{3, 5}, std::pair{5, 3}, std::pair{1, 7}, std::pair{20, 20},
                            std::pair{50, 50}, std::pair{13, 40}}) {
    for (int rep = 0; rep < 5; ++rep) {
      const Matrix m = oracle::gaussian(r, c, rng);
      CHECK(penrose_gap(m, pinv(m)) < 1e-10);
    }
  }
}

TEST_CASE("pinv of a rank-deficient matrix") {
  std::mt19937_64 rng(5);
  const Matrix m = oracle::gaussian(8, 3, rng) * oracle::gaussian(3, 10, rng);
  const Matrix mp = pinv(m);
  CHECK(penrose_gap(m, mp) < 1e-10);
  CHECK(numeric_rank(mp) == 3);
}

TEST_CASE("pinv algebraic properties") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix m = oracle::gaussian(6, 11, rng);
    const Matrix mp = pinv(m);
    CHECK(oracle::rel_gap(pinv(mp), m) < 1e-10);
    CHECK(oracle::rel_gap(pinv(Matrix(m.transpose())), Matrix(mp.transpose())) < 1e-10);
    CHECK(oracle::rel_gap(pinv(Matrix(-2.5 * m)), Matrix(mp / -2.5)) < 1e-10);
    const Matrix via_col = pinv(Matrix(m.transpose() * m)) * m.transpose();
    const Matrix via_row = m.transpose() * oracle::lu_inverse(m * m.transpose());
    CHECK(oracle::rel_gap(via_col, mp) < 1e-8);
    CHECK(oracle::rel_gap(via_row, mp) < 1e-8);
  }
}

TEST_CASE("pinv of an empty matrix has transposed shape") {
  const Matrix m(4, 0);
  const Matrix mp = pinv(m);
  CHECK(mp.rows() == 0);
  CHECK(mp.cols() == 4);
}

TEST_CASE("projector examples") {
  const int n = 5;
  const Matrix ones = Matrix::Ones(n, 1);
  CHECK(oracle::max_abs(projector(ones) - Matrix::Constant(n, n, 1.0 / n)) < 1e-14);
  CHECK(oracle::max_abs(projector(Matrix::Identity(4, 4)) - Matrix::Identity(4, 4)) < 1e-14);

  std::mt19937_64 rng(3);
  const Matrix m = oracle::gaussian(5, 2, rng);
  const Matrix p = projector(m);
  CHECK(oracle::max_abs(p * p - p) < 1e-10);
  CHECK(oracle::max_abs(p - p.transpose()) < 1e-10);
  CHECK(oracle::max_abs(p * m - m) < 1e-10);
  const Matrix pc = complement_projector(m);
  CHECK(oracle::max_abs(pc + p - Matrix::Identity(5, 5)) < 1e-14);
  CHECK(oracle::max_abs(pc * m) < 1e-10);
}

TEST_CASE("gram_inverse") {
  CHECK(oracle::max_abs(gram_inverse(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)) < 1e-14);

  Matrix rows = Matrix::Zero(2, 4);
  rows(0, 0) = rows(0, 1) = 1.0 / std::sqrt(2.0);
  rows(1, 2) = 0.6;
  rows(1, 3) = 0.8;
  CHECK(oracle::max_abs(gram_inverse(rows) - Matrix::Identity(2, 2)) < 1e-12);

  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix w = oracle::gaussian(4, 7, rng);
    const Matrix g = gram_inverse(w);
    CHECK(oracle::rel_gap(g, oracle::lu_inverse(w * w.transpose())) < 1e-8);
    CHECK(oracle::max_abs(g - g.transpose()) == 0.0);
    CHECK(g.diagonal().minCoeff() > 0.0);
  }
}

TEST_CASE("numeric_rank against elimination") {
  CHECK(numeric_rank(Matrix::Zero(3, 3)) == 0);
  CHECK(numeric_rank(Matrix::Identity(4, 4)) == 4);
  std::mt19937_64 rng(23);
  Matrix m = oracle::gaussian(3, 5, rng);
  m.row(2) = m.row(0);
  CHECK(numeric_rank(m) == 2);
  CHECK(oracle::elimination_rank(m) == 2);
  for (int rep = 0; rep < 20; ++rep) {
    const int k = 1 + rep % 5;
    const Matrix a = oracle::gaussian(6, k, rng) * oracle::gaussian(k, 9, rng);
    CHECK(numeric_rank(a) == oracle::elimination_rank(a));
  }
}

TEST_CASE("rank tolerance") {
  CHECK_THROWS_AS(RankTolerance(0.0), InvalidInputError);
  CHECK_THROWS_AS(RankTolerance(-1.0), InvalidInputError);
  CHECK_THROWS_AS(RankTolerance(std::numeric_limits<double>::infinity()), InvalidInputError);
  const RankTolerance def;
  CHECK(def.is_default());
  CHECK(def.relative(3, 7) == doctest::Approx(7 * std::numeric_limits<double>::epsilon()));
  const RankTolerance loose(1e-3);
  CHECK(loose.relative(3, 7) == 1e-3);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-4;
  CHECK(numeric_rank(d) == 2);
  CHECK(numeric_rank(d, loose) == 1);
}

TEST_CASE("non-finite input is rejected") {
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(pinv(m), InvalidInputError);
  CHECK_THROWS_AS(numeric_rank(m), InvalidInputError);
  CHECK_THROWS_AS(gram_inverse(m), InvalidInputError);
}

TEST_CASE("hstack and drop helpers") {
  const Matrix a = Matrix::Ones(2, 2);
  CHECK_THROWS_AS(hstack(a, Matrix::Ones(3, 1)), DimensionError);
  const Matrix h = hstack(a, Matrix::Zero(2, 1));
  CHECK(h.cols() == 3);
  Matrix b(3, 2);
  b << 1, 2, 3, 4, 5, 6;
  const Matrix bd = drop_row(b, 1);
  CHECK(bd(1, 0) == 5.0);
  Vector v(3);
  v << 1, 2, 3;
  CHECK(drop_entry(v, 0)(0) == 2.0);
  CHECK_THROWS_AS(drop_row(b, 3), DimensionError);
}

}  // TEST_SUITE

TEST_SUITE("csv") {

TEST_CASE("parse and round trip") {
  std::istringstream in(" 1, 2.5 ,-3e-2\n\n4,5,6\n");
  const Matrix m = csv::parse_matrix(in);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(0, 2) == -0.03);

  std::ostringstream out;
  const Matrix r = Matrix::Constant(2, 2, 0.1) + Matrix::Identity(2, 2) * (1.0 / 3.0);
  csv::write_matrix(out, r);
  std::istringstream back(out.str());
  CHECK(oracle::max_abs(csv::parse_matrix(back) - r) == 0.0);
}

TEST_CASE("malformed input") {
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(csv::parse_matrix(ragged), IoError);
  std::istringstream text("1,abc\n");
  CHECK_THROWS_AS(csv::parse_matrix(text), IoError);
  std::istringstream nan("1,nan\n");
  CHECK_THROWS_AS(csv::parse_matrix(nan), InvalidInputError);
  std::istringstream empty("\n\n");
  CHECK_THROWS_AS(csv::parse_matrix(empty), IoError);
  CHECK_THROWS_AS(csv::read_matrix("/nonexistent/path.csv"), IoError);
}

TEST_CASE("vectors as a row or a column") {
  const auto dir = std::filesystem::temp_directory_path() / "pregols_csv_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "row.csv") << "1,2,3\n";
    std::ofstream(dir / "col.csv") << "1\n2\n3\n";
    std::ofstream(dir / "mat.csv") << "1,2\n3,4\n";
  }
  CHECK(csv::read_vector(dir / "row.csv").size() == 3);
  CHECK(csv::read_vector(dir / "col.csv")(2) == 3.0);
  CHECK_THROWS_AS(csv::read_vector(dir / "mat.csv"), DimensionError);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
