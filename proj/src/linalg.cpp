#include "pregols/linalg.hpp"

#include "pregols/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pregols {

namespace {

using Svd = Eigen::BDCSVD<Eigen::MatrixXd>;

Svd thin_svd(const Eigen::Ref<const Matrix>& m) {
  return Svd(Eigen::MatrixXd(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
}

}  // namespace

RankTolerance::RankTolerance(double relative) : relative_(relative) {
  if (!(relative > 0.0) || !std::isfinite(relative)) {
    throw InvalidInputError("rank tolerance must be a finite positive number, got " +
                            std::to_string(relative));
  }
}

double RankTolerance::relative(std::size_t rows, std::size_t cols) const {
  if (relative_) return *relative_;
  return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

double RankTolerance::cutoff(std::size_t rows, std::size_t cols, double s_max) const {
  return relative(rows, cols) * s_max;
}

namespace detail {

void throw_non_finite(const char* what) {
  throw InvalidInputError(std::string(what) + " contains non-finite entries");
}

}  // namespace detail

Matrix pinv(const Eigen::Ref<const Matrix>& m, const RankTolerance& tol) {
  require_finite(m);
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());

  const Svd svd = thin_svd(m);
  const Vector& s = svd.singularValues();
  const double cut = tol.cutoff(m.rows(), m.cols(), s.size() ? s(0) : 0.0);

  Vector s_inv = Vector::Zero(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > cut) s_inv(k) = 1.0 / s(k);
  }
  return svd.matrixV() * s_inv.asDiagonal() * svd.matrixU().transpose();
}

Matrix projector(const Eigen::Ref<const Matrix>& m, const RankTolerance& tol) {
  require_finite(m);
  if (m.size() == 0) return Matrix::Zero(m.rows(), m.rows());

  // U_r U_r^T, which equals M M^dagger and is exactly symmetric.
  const Svd svd = thin_svd(m);
  const Vector& s = svd.singularValues();
  const double cut = tol.cutoff(m.rows(), m.cols(), s(0));
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  const Eigen::MatrixXd u = svd.matrixU().leftCols(r);
  return u * u.transpose();
}

Matrix complement_projector(const Eigen::Ref<const Matrix>& m, const RankTolerance& tol) {
  return Matrix::Identity(m.rows(), m.rows()) - projector(m, tol);
}

Matrix gram_inverse(const Eigen::Ref<const Matrix>& m, const RankTolerance& tol) {
  require_finite(m);
  if (m.size() == 0) return Matrix::Zero(m.rows(), m.rows());

  // (M M^T)^dagger = U S^-2 U^T on the retained singular triplets.
  const Svd svd = thin_svd(m);
  const Vector& s = svd.singularValues();
  const double cut = tol.cutoff(m.rows(), m.cols(), s(0));
  Vector s_inv2 = Vector::Zero(s.size());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > cut) s_inv2(k) = 1.0 / (s(k) * s(k));
  }
  const Eigen::MatrixXd& u = svd.matrixU();
  Matrix g = u * s_inv2.asDiagonal() * u.transpose();
  return 0.5 * (g + g.transpose());
}

std::size_t numeric_rank(const Eigen::Ref<const Matrix>& m, const RankTolerance& tol) {
  require_finite(m);
  if (m.size() == 0) return 0;
  const Vector s = singular_values(m);
  const double cut = tol.cutoff(m.rows(), m.cols(), s(0));
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > cut) ++r;
  }
  return r;
}

Vector singular_values(const Eigen::Ref<const Matrix>& m) {
  if (m.size() == 0) return Vector();
  return Svd(Eigen::MatrixXd(m)).singularValues();
}

Matrix hstack(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("hstack: row counts differ (" + std::to_string(a.rows()) + " vs " +
                         std::to_string(b.rows()) + ")");
  }
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

Matrix drop_row(const Eigen::Ref<const Matrix>& m, std::size_t i) {
  const auto n = m.rows();
  const auto idx = static_cast<Eigen::Index>(i);
  if (idx >= n) throw DimensionError("drop_row: index out of range");
  Matrix out(n - 1, m.cols());
  out.topRows(idx) = m.topRows(idx);
  out.bottomRows(n - 1 - idx) = m.bottomRows(n - 1 - idx);
  return out;
}

Vector drop_entry(const Eigen::Ref<const Vector>& v, std::size_t i) {
  const auto n = v.size();
  const auto idx = static_cast<Eigen::Index>(i);
  if (idx >= n) throw DimensionError("drop_entry: index out of range");
  Vector out(n - 1);
  out.head(idx) = v.head(idx);
  out.tail(n - 1 - idx) = v.tail(n - 1 - idx);
  return out;
}

double scaled_diff(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("scaled_diff: shapes differ");
  }
  if (a.size() == 0) return 0.0;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace pregols
