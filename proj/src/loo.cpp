#include "pregols/loo.hpp"

#include "pregols/errors.hpp"

#include <cmath>
#include <string>

namespace pregols {

namespace {

constexpr const char* kLooAssumption = "A1 (leave-one-out)";

void require_length(const Eigen::Ref<const Vector>& y, std::size_t n) {
  if (static_cast<std::size_t>(y.size()) != n) {
    throw DimensionError("response has length " + std::to_string(y.size()) + ", expected " +
                         std::to_string(n));
  }
}

void require_full_row_rank(const Eigen::Ref<const Matrix>& x, const RankTolerance& tol) {
  const auto rank = numeric_rank(x, tol);
  if (rank != static_cast<std::size_t>(x.rows())) {
    throw AssumptionError("A1", "X must have full row rank " + std::to_string(x.rows()) +
                                    ", numeric rank is " + std::to_string(rank));
  }
}

}  // namespace

LooContext::LooContext(const DesignPartition& d)
    : d_(&d),
      w_pinv_(pinv(d.w(), d.tolerance())),
      g_w_(gram_inverse(d.w(), d.tolerance())),
      w_pinv_t_(w_pinv_ * d.t()) {
  const Vector s = singular_values(d.w());
  w_smax_ = s(0);
  w_smin_ = s(s.size() - 1);
}

void LooContext::check_index(std::size_t i) const {
  if (i >= d_->n()) {
    throw DimensionError("LOO index " + std::to_string(i) + " out of range for n = " +
                         std::to_string(d_->n()));
  }
}

void LooContext::validate(std::size_t i) const {
  check_index(i);
  const auto& d = *d_;
  const auto& tol = d.tolerance();
  const auto n = d.n();
  if (n < 2) throw AssumptionError(kLooAssumption, "need at least two rows");

  // W_{~i} W_{~i}^T is a principal submatrix of W W^T, so by interlacing
  // s_min(W_{~i}) >= s_min(W) and s_max(W_{~i}) <= s_max(W). When s_min(W)
  // clears the cutoff computed from s_max(W), W_{~i} clears its own cutoff
  // and the explicit SVD is skipped.
  if (!(w_smin_ > tol.cutoff(n - 1, d.q(), w_smax_))) {
    const auto rank_w = numeric_rank(drop_row(d.w(), i), tol);
    if (rank_w != n - 1) {
      throw AssumptionError(kLooAssumption, "W without row " + std::to_string(i) +
                                                " has numeric rank " + std::to_string(rank_w) +
                                                ", need " + std::to_string(n - 1));
    }
  }
  if (!(g_w_(i, i) > 0.0)) {
    throw AssumptionError(kLooAssumption,
                          "diagonal of G_W is not positive at row " + std::to_string(i));
  }
  if (d.has_unpenalized()) {
    const auto rank_t = numeric_rank(drop_row(d.t(), i), tol);
    if (rank_t != d.m()) {
      throw AssumptionError(kLooAssumption, "T without row " + std::to_string(i) +
                                                " has numeric rank " + std::to_string(rank_t) +
                                                ", need " + std::to_string(d.m()));
    }
  }
}

LooProjector LooContext::projector(std::size_t i) const {
  validate(i);
  const Vector k = w_pinv_.col(static_cast<Eigen::Index>(i));
  const double denom = g_w_(i, i);
  LooProjector out;
  out.index = i;
  out.p_i = (k * k.transpose()) / denom;
  out.w_tilde = w_pinv_ - k * ((k.transpose() * w_pinv_) / denom);
  return out;
}

LooCoefficients LooContext::coefficients(std::size_t i, const Eigen::Ref<const Vector>& y) const {
  require_length(y, d_->n());
  const auto& d = *d_;
  const auto& tol = d.tolerance();
  const LooProjector proj = projector(i);
  const Vector wt_y = proj.w_tilde * y;

  LooCoefficients out;
  if (!d.has_unpenalized()) {
    out.lambda = d.w().transpose() * (proj.w_tilde.transpose() * wt_y);
    out.tau = Vector(0);
    return out;
  }
  const Matrix wt_t = proj.w_tilde * d.t();
  const auto rank = numeric_rank(wt_t, tol);
  if (rank != d.m()) {
    throw AssumptionError(kLooAssumption, "W~_i T has numeric rank " + std::to_string(rank) +
                                              " at row " + std::to_string(i) + ", need " +
                                              std::to_string(d.m()));
  }
  const Vector resid = wt_y - pregols::projector(wt_t, tol) * wt_y;
  out.lambda = d.w().transpose() * (proj.w_tilde.transpose() * resid);
  out.tau = pinv(wt_t, tol) * wt_y;
  return out;
}

RowVector LooContext::residual_row(std::size_t i) const {
  validate(i);
  const auto& d = *d_;
  const auto& tol = d.tolerance();
  const auto idx = static_cast<Eigen::Index>(i);
  const double denom = g_w_(idx, idx);
  const RowVector r = g_w_.row(idx) / denom;
  if (!d.has_unpenalized()) return r;

  // W~_i = W^dagger - k k^T W^dagger / G_ii with k = W^dagger e_i; every
  // product below is formed against that rank-one structure.
  const Vector k = w_pinv_.col(idx);
  const RowVector kt_wpinv = k.transpose() * w_pinv_;
  const Matrix wt_t = w_pinv_t_ - k * ((k.transpose() * w_pinv_t_) / denom);
  const auto rank = numeric_rank(wt_t, tol);
  if (rank != d.m()) {
    throw AssumptionError(kLooAssumption, "W~_i T has numeric rank " + std::to_string(rank) +
                                              " at row " + std::to_string(i) + ", need " +
                                              std::to_string(d.m()));
  }
  const RowVector u = (r * d.t()) * pinv(wt_t, tol);
  const RowVector h = u * w_pinv_ - (u.dot(k) / denom) * kt_wpinv;
  return r - h;
}

Matrix LooContext::residual_operator() const {
  const auto n = static_cast<Eigen::Index>(d_->n());
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a.row(i) = residual_row(static_cast<std::size_t>(i));
  return a;
}

LooCoefficients loo_fit(const DesignPartition& d, const Eigen::Ref<const Vector>& y,
                        std::size_t i) {
  require_finite(y, "y");
  return LooContext(d).coefficients(i, y);
}

double loo_residual_partial(const DesignPartition& d, const Eigen::Ref<const Vector>& y,
                            std::size_t i) {
  require_length(y, d.n());
  require_finite(y, "y");
  const LooContext ctx(d);
  ctx.validate(i);
  const auto& tol = d.tolerance();
  const auto n = static_cast<Eigen::Index>(d.n());
  const auto idx = static_cast<Eigen::Index>(i);

  // Literal evaluation with H_i materialized.
  Matrix h = Matrix::Zero(n, n);
  if (d.has_unpenalized()) {
    const LooProjector proj = ctx.projector(i);
    const Matrix wt_t = proj.w_tilde * d.t();
    h = d.t() * (pinv(wt_t, tol) * proj.w_tilde);
  }
  const Vector g_resid = ctx.gram() * (y - h * y);
  return g_resid(idx) / ctx.gram()(idx, idx);
}

Vector loo_residuals_partial(const DesignPartition& d, const Eigen::Ref<const Vector>& y) {
  require_length(y, d.n());
  require_finite(y, "y");
  return LooContext(d).residual_operator() * y;
}

LooRecord loo_record(const DesignPartition& d, const Eigen::Ref<const Vector>& y, std::size_t i) {
  require_finite(y, "y");
  const LooContext ctx(d);
  LooCoefficients c = ctx.coefficients(i, y);
  LooRecord rec;
  rec.index = i;
  rec.residual = ctx.residual_row(i).dot(y);
  rec.lambda_loo = std::move(c.lambda);
  rec.tau_loo = std::move(c.tau);
  return rec;
}

Vector loo_residuals_full(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                          const RankTolerance& tol) {
  require_finite(x, "X");
  require_finite(y, "y");
  require_length(y, static_cast<std::size_t>(x.rows()));
  require_full_row_rank(x, tol);
  const Matrix g = gram_inverse(x, tol);
  return (g * y).cwiseQuotient(g.diagonal());
}

Vector loo_coefficients_full(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                             std::size_t i, const RankTolerance& tol) {
  require_finite(y, "y");
  require_length(y, static_cast<std::size_t>(x.rows()));
  if (i >= static_cast<std::size_t>(x.rows())) throw DimensionError("LOO index out of range");
  require_full_row_rank(x, tol);
  const Matrix x_pinv = pinv(x, tol);
  const Matrix g = gram_inverse(x, tol);
  const auto idx = static_cast<Eigen::Index>(i);
  const Vector k = x_pinv.col(idx);
  const Vector beta = x_pinv * y;
  return beta - k * (k.dot(beta) / g(idx, idx));
}

Matrix gram_downdate(const Eigen::Ref<const Matrix>& x, std::size_t i, const RankTolerance& tol) {
  require_finite(x, "X");
  const auto n = x.rows();
  if (i >= static_cast<std::size_t>(n)) throw DimensionError("LOO index out of range");
  require_full_row_rank(x, tol);
  const Matrix x_pinv = pinv(x, tol);
  const Matrix g = gram_inverse(x, tol);
  const auto idx = static_cast<Eigen::Index>(i);
  const double gii = g(idx, idx);
  const Vector gi = g.col(idx);

  Matrix core = Matrix::Identity(n, n);
  core.row(idx) -= gi.transpose() / gii;
  core.col(idx) -= gi / gii;
  core(idx, idx) += gi.squaredNorm() / (gii * gii);
  Matrix out = x_pinv * core * x_pinv.transpose();
  return 0.5 * (out + out.transpose());
}

LooCoefficients brute_force_refit(const DesignPartition& d, const Eigen::Ref<const Vector>& y,
                                  std::size_t i) {
  require_length(y, d.n());
  if (i >= d.n()) throw DimensionError("LOO index out of range");
  const Vector y_drop = drop_entry(y, i);
  const auto refit = [&]() {
    try {
      if (!d.has_unpenalized()) {
        return fit_partial(DesignPartition::without_unpenalized(drop_row(d.w(), i), d.tolerance()),
                           y_drop);
      }
      return fit_partial(DesignPartition(drop_row(d.w(), i), drop_row(d.t(), i), d.tolerance()),
                         y_drop);
    } catch (const AssumptionError& e) {
      throw AssumptionError(kLooAssumption, "refit without row " + std::to_string(i) + ": " +
                                                e.what());
    }
  }();
  return LooCoefficients{refit.lambda_hat, refit.tau_hat};
}

namespace detail {

Matrix q_matrix(const Eigen::Ref<const Matrix>& gram, std::size_t i) {
  const auto n = gram.rows();
  const auto idx = static_cast<Eigen::Index>(i);
  Matrix q = Matrix::Zero(n, n);
  q.row(idx) = gram.row(idx) / gram(idx, idx);
  return q;
}

}  // namespace detail

}  // namespace pregols
