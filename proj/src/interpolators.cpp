#include "pregols/interpolators.hpp"

#include "pregols/errors.hpp"

#include <string>

namespace pregols {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_length(const Eigen::Ref<const Vector>& y, std::size_t n) {
  if (static_cast<std::size_t>(y.size()) != n) {
    throw DimensionError("response has length " + std::to_string(y.size()) + ", expected " +
                         std::to_string(n));
  }
}

}  // namespace

DesignPartition::DesignPartition(Matrix w, Matrix t, RankTolerance tol)
    : DesignPartition(std::move(w), std::move(t), tol, false) {}

DesignPartition DesignPartition::without_unpenalized(Matrix w, RankTolerance tol) {
  const auto n = w.rows();
  return DesignPartition(std::move(w), Matrix(n, 0), tol, true);
}

DesignPartition::DesignPartition(Matrix w, Matrix t, RankTolerance tol, bool allow_empty_t)
    : w_(std::move(w)), t_(std::move(t)), tol_(tol) {
  if (w_.rows() == 0 || w_.cols() == 0) throw DimensionError("W must be non-empty");
  if (t_.rows() != w_.rows()) {
    throw DimensionError("W is " + shape(w_) + " but T is " + shape(t_) +
                         "; row counts must agree");
  }
  if (t_.cols() == 0 && !allow_empty_t) {
    throw DimensionError("T must have at least one column; use without_unpenalized for m = 0");
  }
  require_finite(w_, "W");
  require_finite(t_, "T");

  const auto n = static_cast<std::size_t>(w_.rows());
  if (q() < n) {
    throw AssumptionError("A1", "W is " + shape(w_) + "; need at least as many columns as rows");
  }
  const auto rank_w = numeric_rank(w_, tol_);
  if (rank_w != n) {
    throw AssumptionError("A1", "W must have full row rank " + std::to_string(n) +
                                    ", numeric rank is " + std::to_string(rank_w));
  }
  if (t_.cols() > 0) {
    if (m() >= n) {
      throw AssumptionError("A1", "T is " + shape(t_) + "; need fewer columns than rows");
    }
    const auto rank_t = numeric_rank(t_, tol_);
    if (rank_t != m()) {
      throw AssumptionError("A1", "T must have full column rank " + std::to_string(m()) +
                                      ", numeric rank is " + std::to_string(rank_t));
    }
  }
}

Matrix DesignPartition::x() const { return hstack(w_, t_); }

FullFit fit_full(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                 const RankTolerance& tol) {
  require_finite(x, "X");
  require_finite(y, "y");
  require_length(y, static_cast<std::size_t>(x.rows()));
  const auto rank = numeric_rank(x, tol);
  if (rank != static_cast<std::size_t>(x.rows())) {
    throw AssumptionError("A1", "X must have full row rank " + std::to_string(x.rows()) +
                                    ", numeric rank is " + std::to_string(rank));
  }
  FullFit fit;
  fit.beta_hat = pinv(x, tol) * y;
  fit.max_interp_residual = (y - x * fit.beta_hat).cwiseAbs().maxCoeff();
  return fit;
}

PartialCoefficients partial_coefficients(const DesignPartition& d,
                                         const Eigen::Ref<const Matrix>& rhs) {
  if (static_cast<std::size_t>(rhs.rows()) != d.n()) {
    throw DimensionError("right-hand side has " + std::to_string(rhs.rows()) + " rows, expected " +
                         std::to_string(d.n()));
  }
  require_finite(rhs, "right-hand side");
  const auto& tol = d.tolerance();
  PartialCoefficients out;
  if (!d.has_unpenalized()) {
    out.lambda = pinv(d.w(), tol) * rhs;
    out.tau = Matrix(0, rhs.cols());
    return out;
  }
  const Matrix pt_perp = complement_projector(d.t(), tol);
  const Matrix resid_rhs = pt_perp * rhs;
  out.lambda = pinv(pt_perp * d.w(), tol) * resid_rhs;

  const Matrix w_pinv = pinv(d.w(), tol);
  out.tau = pinv(w_pinv * d.t(), tol) * (w_pinv * rhs);
  return out;
}

PartialFit fit_partial(const DesignPartition& d, const Eigen::Ref<const Vector>& y) {
  require_length(y, d.n());
  require_finite(y, "y");
  const auto coeffs = partial_coefficients(d, y);
  PartialFit fit;
  fit.lambda_hat = coeffs.lambda.col(0);
  fit.tau_hat = coeffs.tau.col(0);
  Vector fitted = d.w() * fit.lambda_hat;
  if (d.has_unpenalized()) fitted += d.t() * fit.tau_hat;
  fit.max_interp_residual = (y - fitted).cwiseAbs().maxCoeff();
  return fit;
}

PartialFitVariants fit_partial_variants(const DesignPartition& d,
                                        const Eigen::Ref<const Vector>& y) {
  require_length(y, d.n());
  require_finite(y, "y");
  const auto& tol = d.tolerance();
  const Matrix& w = d.w();
  const Matrix& t = d.t();

  const Matrix w_pinv = pinv(w, tol);
  const Matrix g_w = gram_inverse(w, tol);
  const Vector w_pinv_y = w_pinv * y;
  const Matrix w_pinv_t = w_pinv * t;

  PartialFitVariants v;
  const Matrix p_wt = projector(Matrix(w.transpose()), tol);
  v.lambda_remark1 = p_wt * (w_pinv_y - projector(w_pinv_t, tol) * w_pinv_y);

  const Matrix g_t = g_w * t;
  v.tau_prep2 = pinv(t.transpose() * g_t, tol) * (g_t.transpose() * y);

  const Vector tau = partial_coefficients(d, y).tau.col(0);
  v.lambda_prep1 = w.transpose() * (g_w * (y - t * tau));
  return v;
}

double predict(const PartialFit& fit, const Eigen::Ref<const RowVector>& w_new,
               const Eigen::Ref<const RowVector>& t_new) {
  if (w_new.size() != fit.lambda_hat.size() || t_new.size() != fit.tau_hat.size()) {
    throw DimensionError("predict: expected rows of length " +
                         std::to_string(fit.lambda_hat.size()) + " and " +
                         std::to_string(fit.tau_hat.size()) + ", got " +
                         std::to_string(w_new.size()) + " and " + std::to_string(t_new.size()));
  }
  return w_new.dot(fit.lambda_hat) + t_new.dot(fit.tau_hat);
}

}  // namespace pregols
