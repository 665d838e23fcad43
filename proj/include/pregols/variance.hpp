#pragma once

// Homoskedastic noise-variance estimators for OLS interpolators and their
// exact bias under y = X beta + eps, eps ~ (0, sigma^2 I).
//
// Every estimator has the form |A y|^2 / c for a fixed matrix A and scalar c:
//
//   full     A = diag(G_X)^-1 G_X                       c = |A|_F^2
//   partial  row i of A = e_i^T diag(G_W)^-1 G_W (I - H_i)   c = |A|_F^2
//   w        A = P_T                                    c = rank(T)
//   wc       A = P^perp_{W^dagger T} W^dagger           c = tr(P^perp_{W^dagger T} (W^T W)^dagger)
//
// so E[estimate] = sigma^2 |A|_F^2 / c + |A E[y]|^2 / c. With the chosen
// denominators |A|_F^2 = c, and the bias is |A E[y]|^2 / c.

#include "pregols/interpolators.hpp"
#include "pregols/linalg.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace pregols {

enum class Estimator { full, partial, w, wc };

inline constexpr std::array<Estimator, 4> kAllEstimators = {Estimator::full, Estimator::partial,
                                                            Estimator::w, Estimator::wc};

std::string_view to_string(Estimator e);
/// Accepts "full", "partial", "w", "wc". Throws InvalidInputError otherwise.
Estimator parse_estimator(std::string_view name);

struct GaussMarkovTruth {
  Vector beta;  // length p = q + m, W coefficients first
  double sigma2 = 1.0;

  /// Throws AssumptionError("B1") for sigma2 <= 0 or non-finite beta, and
  /// DimensionError when beta does not have length p.
  void validate(std::size_t p) const;
};

struct VarianceReport {
  Estimator estimator = Estimator::full;
  double estimate = 0.0;
  double denominator = 0.0;
  std::optional<double> expected_bias;
  /// wc only: tr(P^perp_T G_W), the alternative denominator. Reported, not used.
  std::optional<double> alt_denominator;
};

/// Precomputed residual map and normalizer for one estimator on one design.
class EstimatorOperator {
public:
  EstimatorOperator(Estimator id, Matrix a, double denominator);

  Estimator id() const noexcept { return id_; }
  const Matrix& residual_map() const noexcept { return a_; }
  double denominator() const noexcept { return denom_; }

  double estimate(const Eigen::Ref<const Vector>& y) const;
  /// |A mean_y|^2 / c.
  double bias(const Eigen::Ref<const Vector>& mean_y) const;
  /// |A|_F^2 / c; equals 1 whenever the estimator is unbiased at E[y] = 0.
  double noise_gain() const;

private:
  Estimator id_;
  Matrix a_;
  double denom_;
};

/// Builds the operator on X = [W, T] (full) or the partition (others).
/// w and wc need m >= 1; an empty T raises InvalidInputError.
EstimatorOperator make_operator(Estimator id, const DesignPartition& d);
EstimatorOperator full_operator(const Eigen::Ref<const Matrix>& x, const RankTolerance& tol = {});

VarianceReport sigma2_full(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                           const RankTolerance& tol = {});
VarianceReport sigma2_partial(const DesignPartition& d, const Eigen::Ref<const Vector>& y);
/// |y - P^perp_T W lambda_hat|^2 / rank(T), evaluated from the fitted lambda.
VarianceReport sigma2_w(const DesignPartition& d, const Eigen::Ref<const Vector>& y);
/// |W^dagger y - W^dagger T tau_hat|^2 / tr(P^perp_{W^dagger T} (W^T W)^dagger).
VarianceReport sigma2_wc(const DesignPartition& d, const Eigen::Ref<const Vector>& y);

VarianceReport estimate_variance(Estimator id, const DesignPartition& d,
                                 const Eigen::Ref<const Vector>& y);
/// As above, with expected_bias filled from the truth.
VarianceReport estimate_variance(Estimator id, const DesignPartition& d,
                                 const Eigen::Ref<const Vector>& y, const GaussMarkovTruth& truth);

double expected_bias(Estimator id, const DesignPartition& d, const GaussMarkovTruth& truth);

/// tr(P^perp_T G_W).
double wc_alt_denominator(const DesignPartition& d);

}  // namespace pregols
