#include "pregols/cochran.hpp"

#include "pregols/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pregols {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void check_full_column_rank(const Matrix& m, const char* name, std::size_t n,
                            const RankTolerance& tol) {
  const auto cols = static_cast<std::size_t>(m.cols());
  if (cols == 0) throw DimensionError(std::string(name) + " must have at least one column");
  if (cols >= n) {
    throw AssumptionError("A2", std::string(name) + " is " + shape(m) +
                                    "; need fewer columns than rows");
  }
  const auto rank = numeric_rank(m, tol);
  if (rank != cols) {
    throw AssumptionError("A2", std::string(name) + " must have full column rank " +
                                    std::to_string(cols) + ", numeric rank is " +
                                    std::to_string(rank));
  }
}

Matrix null_space_projector(const Matrix& a, const RankTolerance& tol) {
  return Matrix::Identity(a.cols(), a.cols()) - pinv(a, tol) * a;
}

Vector gaussian(Eigen::Index size, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(size);
  for (Eigen::Index k = 0; k < size; ++k) v(k) = normal(rng);
  return v;
}

}  // namespace

CochranDesign::CochranDesign(Matrix z, Matrix u, Matrix t, RankTolerance tol)
    : z_(std::move(z)), u_(std::move(u)), t_(std::move(t)), tol_(tol) {
  if (z_.size() == 0) throw DimensionError("Z must be non-empty");
  if (u_.rows() != z_.rows() || t_.rows() != z_.rows()) {
    throw DimensionError("Z, U, T must share a row count (got " + shape(z_) + ", " + shape(u_) +
                         ", " + shape(t_) + ")");
  }
  require_finite(z_, "Z");
  require_finite(u_, "U");
  require_finite(t_, "T");
  const auto n = this->n();
  if (static_cast<std::size_t>(z_.cols()) < n) {
    throw AssumptionError("A2", "Z is " + shape(z_) + "; need at least as many columns as rows");
  }
  const auto rank_z = numeric_rank(z_, tol_);
  if (rank_z != n) {
    throw AssumptionError("A2", "Z must have full row rank " + std::to_string(n) +
                                    ", numeric rank is " + std::to_string(rank_z));
  }
  check_full_column_rank(u_, "U", n, tol_);
  check_full_column_rank(t_, "T", n, tol_);
}

DesignPartition CochranDesign::long_partition() const {
  return DesignPartition(hstack(z_, u_), t_, tol_);
}

DesignPartition CochranDesign::short_partition() const { return DesignPartition(z_, t_, tol_); }

LongFit fit_long(const CochranDesign& d, const Eigen::Ref<const Vector>& y) {
  const PartialFit fit = fit_partial(d.long_partition(), y);
  const auto l = d.z().cols();
  const auto r = d.u().cols();
  return LongFit{fit.lambda_hat.head(l), fit.lambda_hat.segment(l, r), fit.tau_hat};
}

ShortFit fit_short(const Eigen::Ref<const Matrix>& z, const Eigen::Ref<const Matrix>& t,
                   const Eigen::Ref<const Vector>& y, const RankTolerance& tol) {
  const PartialFit fit = fit_partial(DesignPartition(z, t, tol), y);
  return ShortFit{fit.lambda_hat, fit.tau_hat};
}

AuxFit fit_aux(const Eigen::Ref<const Matrix>& z, const Eigen::Ref<const Matrix>& t,
               const Eigen::Ref<const Matrix>& u, const RankTolerance& tol) {
  // The Frobenius objective separates by column, so one multi-column solve
  // gives the column-wise minimum-norm fits.
  auto coeffs = partial_coefficients(DesignPartition(z, t, tol), u);
  return AuxFit{std::move(coeffs.lambda), std::move(coeffs.tau)};
}

CochranFits fit_all(const CochranDesign& d, const Eigen::Ref<const Vector>& y) {
  return CochranFits{fit_long(d, y), fit_short(d.z(), d.t(), y, d.tolerance()),
                     fit_aux(d.z(), d.t(), d.u(), d.tolerance())};
}

double image_gap(const CochranDesign& d, const CochranFits& f) {
  const auto& lf = f.long_fit;
  const Vector lhs = d.z() * f.short_fit.alpha_tilde + d.t() * f.short_fit.tau_tilde;
  const Vector rhs = d.z() * (lf.alpha_hat + f.aux_fit.delta_mat * lf.gamma_hat) +
                     d.t() * (lf.tau_hat + f.aux_fit.delta_small * lf.gamma_hat);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

double coeff_gap(const CochranFits& f) {
  const auto& lf = f.long_fit;
  const Vector da = f.short_fit.alpha_tilde - lf.alpha_hat - f.aux_fit.delta_mat * lf.gamma_hat;
  const Vector dt = f.short_fit.tau_tilde - lf.tau_hat - f.aux_fit.delta_small * lf.gamma_hat;
  return std::max(da.cwiseAbs().maxCoeff(), dt.cwiseAbs().maxCoeff());
}

CochranGaps cochran_check(const CochranDesign& d, const Eigen::Ref<const Vector>& y) {
  const CochranFits fits = fit_all(d, y);
  return CochranGaps{image_gap(d, fits), coeff_gap(fits)};
}

CochranFits perturb_within_solution_sets(const CochranDesign& d, const CochranFits& fits,
                                         std::mt19937_64& rng, double scale) {
  const auto& tol = d.tolerance();
  const auto l = d.z().cols();
  const auto r = d.u().cols();
  const auto m = d.t().cols();
  CochranFits out = fits;

  {
    const Matrix a = hstack(hstack(d.z(), d.u()), d.t());
    const Vector delta = null_space_projector(a, tol) * gaussian(a.cols(), rng, scale);
    out.long_fit.alpha_hat += delta.head(l);
    out.long_fit.gamma_hat += delta.segment(l, r);
    out.long_fit.tau_hat += delta.tail(m);
  }

  const Matrix a = hstack(d.z(), d.t());
  const Matrix null_proj = null_space_projector(a, tol);
  {
    const Vector delta = null_proj * gaussian(a.cols(), rng, scale);
    out.short_fit.alpha_tilde += delta.head(l);
    out.short_fit.tau_tilde += delta.tail(m);
  }
  for (Eigen::Index j = 0; j < r; ++j) {
    const Vector delta = null_proj * gaussian(a.cols(), rng, scale);
    out.aux_fit.delta_mat.col(j) += delta.head(l);
    out.aux_fit.delta_small.col(j) += delta.tail(m);
  }
  return out;
}

OvbDecomposition ovb_decompose(const CochranDesign& d, const Eigen::Ref<const Vector>& y) {
  const Matrix& t = d.t();
  if (t.cols() != 2) {
    throw InvalidInputError("OVB decomposition needs T = [D, 1] with two columns, got " +
                            shape(t));
  }
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    if (t(i, 0) != 0.0 && t(i, 0) != 1.0) {
      throw InvalidInputError("treatment column D must be binary; row " + std::to_string(i) +
                              " holds " + std::to_string(t(i, 0)));
    }
    if (t(i, 1) != 1.0) {
      throw InvalidInputError("second column of T must be all ones; row " + std::to_string(i) +
                              " holds " + std::to_string(t(i, 1)));
    }
  }

  const CochranFits fits = fit_all(d, y);
  OvbDecomposition out;
  out.tau_long_d = fits.long_fit.tau_hat(0);
  out.tau_short_d = fits.short_fit.tau_tilde(0);
  out.bias = out.tau_short_d - out.tau_long_d;
  out.impact = fits.long_fit.gamma_hat;
  out.imbalance = fits.aux_fit.delta_small.row(0);
  out.decomposition_gap = std::abs(out.bias - out.imbalance.dot(out.impact));
  return out;
}

}  // namespace pregols
