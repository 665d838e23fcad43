#include "pregols/variance.hpp"

#include "pregols/errors.hpp"
#include "pregols/loo.hpp"

#include <cmath>
#include <string>

namespace pregols {

namespace {

void require_length(const Eigen::Ref<const Vector>& y, std::size_t n) {
  if (static_cast<std::size_t>(y.size()) != n) {
    throw DimensionError("response has length " + std::to_string(y.size()) + ", expected " +
                         std::to_string(n));
  }
}

void require_unpenalized(Estimator id, const DesignPartition& d) {
  if (!d.has_unpenalized()) {
    throw InvalidInputError("estimator " + std::string(to_string(id)) +
                            " needs an unpenalized block T with at least one column");
  }
}

Vector mean_response(const DesignPartition& d, const GaussMarkovTruth& truth) {
  truth.validate(d.p());
  Vector mu = d.w() * truth.beta.head(static_cast<Eigen::Index>(d.q()));
  if (d.has_unpenalized()) mu += d.t() * truth.beta.tail(static_cast<Eigen::Index>(d.m()));
  return mu;
}

// P^perp_{W^dagger T} W^dagger
Matrix wc_map(const DesignPartition& d) {
  const Matrix w_pinv = pinv(d.w(), d.tolerance());
  return complement_projector(Matrix(w_pinv * d.t()), d.tolerance()) * w_pinv;
}

}  // namespace

std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::full:
      return "full";
    case Estimator::partial:
      return "partial";
    case Estimator::w:
      return "w";
    case Estimator::wc:
      return "wc";
  }
  return "?";
}

Estimator parse_estimator(std::string_view name) {
  for (const Estimator e : kAllEstimators) {
    if (to_string(e) == name) return e;
  }
  throw InvalidInputError("unknown estimator '" + std::string(name) +
                          "' (expected full, partial, w or wc)");
}

void GaussMarkovTruth::validate(std::size_t p) const {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw AssumptionError("B1", "noise variance must be positive and finite, got " +
                                    std::to_string(sigma2));
  }
  if (static_cast<std::size_t>(beta.size()) != p) {
    throw DimensionError("beta has length " + std::to_string(beta.size()) + ", design has p = " +
                         std::to_string(p));
  }
  if (!beta.allFinite()) throw AssumptionError("B1", "beta must be finite");
}

EstimatorOperator::EstimatorOperator(Estimator id, Matrix a, double denominator)
    : id_(id), a_(std::move(a)), denom_(denominator) {
  if (!(denom_ > 0.0) || !std::isfinite(denom_)) {
    throw AssumptionError("A1", "estimator " + std::string(to_string(id_)) +
                                    " has non-positive denominator " + std::to_string(denom_));
  }
}

double EstimatorOperator::estimate(const Eigen::Ref<const Vector>& y) const {
  require_length(y, static_cast<std::size_t>(a_.cols()));
  return (a_ * y).squaredNorm() / denom_;
}

double EstimatorOperator::bias(const Eigen::Ref<const Vector>& mean_y) const {
  return estimate(mean_y);
}

double EstimatorOperator::noise_gain() const { return a_.squaredNorm() / denom_; }

EstimatorOperator full_operator(const Eigen::Ref<const Matrix>& x, const RankTolerance& tol) {
  require_finite(x, "X");
  const auto rank = numeric_rank(x, tol);
  if (rank != static_cast<std::size_t>(x.rows())) {
    throw AssumptionError("A1", "X must have full row rank " + std::to_string(x.rows()) +
                                    ", numeric rank is " + std::to_string(rank));
  }
  const Matrix g = gram_inverse(x, tol);
  Matrix a = g.diagonal().cwiseInverse().asDiagonal() * g;
  const double denom = a.squaredNorm();
  return EstimatorOperator(Estimator::full, std::move(a), denom);
}

EstimatorOperator make_operator(Estimator id, const DesignPartition& d) {
  switch (id) {
    case Estimator::full:
      return full_operator(d.x(), d.tolerance());
    case Estimator::partial: {
      Matrix a = LooContext(d).residual_operator();
      const double denom = a.squaredNorm();
      return EstimatorOperator(id, std::move(a), denom);
    }
    case Estimator::w: {
      require_unpenalized(id, d);
      return EstimatorOperator(id, projector(d.t(), d.tolerance()),
                               static_cast<double>(numeric_rank(d.t(), d.tolerance())));
    }
    case Estimator::wc: {
      require_unpenalized(id, d);
      Matrix a = wc_map(d);
      // tr(P^perp (W^T W)^dagger) = tr(P^perp W^dagger W^dagger,T) = |A|_F^2
      const double denom = a.squaredNorm();
      return EstimatorOperator(id, std::move(a), denom);
    }
  }
  throw InvalidInputError("unknown estimator");
}

VarianceReport sigma2_full(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                           const RankTolerance& tol) {
  require_finite(y, "y");
  require_length(y, static_cast<std::size_t>(x.rows()));
  const EstimatorOperator op = full_operator(x, tol);
  VarianceReport r;
  r.estimator = Estimator::full;
  r.estimate = loo_residuals_full(x, y, tol).squaredNorm() / op.denominator();
  r.denominator = op.denominator();
  return r;
}

VarianceReport sigma2_partial(const DesignPartition& d, const Eigen::Ref<const Vector>& y) {
  require_length(y, d.n());
  require_finite(y, "y");
  const Matrix a = LooContext(d).residual_operator();
  VarianceReport r;
  r.estimator = Estimator::partial;
  r.denominator = a.squaredNorm();
  if (!(r.denominator > 0.0)) {
    throw AssumptionError("A1", "partial estimator has zero denominator");
  }
  r.estimate = (a * y).squaredNorm() / r.denominator;
  return r;
}

VarianceReport sigma2_w(const DesignPartition& d, const Eigen::Ref<const Vector>& y) {
  require_unpenalized(Estimator::w, d);
  const PartialFit fit = fit_partial(d, y);
  const Matrix pt_perp = complement_projector(d.t(), d.tolerance());
  VarianceReport r;
  r.estimator = Estimator::w;
  r.denominator = static_cast<double>(numeric_rank(d.t(), d.tolerance()));
  r.estimate = (y - pt_perp * (d.w() * fit.lambda_hat)).squaredNorm() / r.denominator;
  return r;
}

VarianceReport sigma2_wc(const DesignPartition& d, const Eigen::Ref<const Vector>& y) {
  require_unpenalized(Estimator::wc, d);
  const auto& tol = d.tolerance();
  const PartialFit fit = fit_partial(d, y);
  const Matrix w_pinv = pinv(d.w(), tol);
  const Matrix w_pinv_t = w_pinv * d.t();
  const Matrix perp = complement_projector(w_pinv_t, tol);
  const Matrix wtw_pinv = w_pinv * w_pinv.transpose();  // (W^T W)^dagger

  VarianceReport r;
  r.estimator = Estimator::wc;
  r.denominator = (perp * wtw_pinv).trace();
  if (!(r.denominator > 0.0)) {
    throw AssumptionError("A1", "wc estimator has non-positive denominator");
  }
  r.estimate = (w_pinv * y - w_pinv_t * fit.tau_hat).squaredNorm() / r.denominator;
  r.alt_denominator = wc_alt_denominator(d);
  return r;
}

VarianceReport estimate_variance(Estimator id, const DesignPartition& d,
                                 const Eigen::Ref<const Vector>& y) {
  switch (id) {
    case Estimator::full:
      return sigma2_full(d.x(), y, d.tolerance());
    case Estimator::partial:
      return sigma2_partial(d, y);
    case Estimator::w:
      return sigma2_w(d, y);
    case Estimator::wc:
      return sigma2_wc(d, y);
  }
  throw InvalidInputError("unknown estimator");
}

VarianceReport estimate_variance(Estimator id, const DesignPartition& d,
                                 const Eigen::Ref<const Vector>& y, const GaussMarkovTruth& truth) {
  VarianceReport r = estimate_variance(id, d, y);
  r.expected_bias = expected_bias(id, d, truth);
  return r;
}

double expected_bias(Estimator id, const DesignPartition& d, const GaussMarkovTruth& truth) {
  const Vector mu = mean_response(d, truth);
  return make_operator(id, d).bias(mu);
}

double wc_alt_denominator(const DesignPartition& d) {
  require_unpenalized(Estimator::wc, d);
  const auto& tol = d.tolerance();
  return (complement_projector(d.t(), tol) * gram_inverse(d.w(), tol)).trace();
}

}  // namespace pregols
