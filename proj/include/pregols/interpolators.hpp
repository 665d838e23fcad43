#pragma once

// Minimum-norm OLS interpolation in the p > n regime.
//
// Full regularization penalizes every coefficient: beta = X^dagger y.
// Partial regularization splits X = [W, T], penalizes only the W block and
// leaves T free:
//
//   lambda = (P_T^perp W)^dagger P_T^perp y,   tau = (W^dagger T)^dagger W^dagger y.

#include "pregols/linalg.hpp"

#include <cstddef>

namespace pregols {

/// Validated split design [W | T].
///
/// Construction checks rank(W) = n (full row rank, n <= q) and
/// rank(T) = m < n; violations raise AssumptionError("A1").
class DesignPartition {
public:
  DesignPartition(Matrix w, Matrix t, RankTolerance tol = {});

  /// Degenerate m = 0 case: no unpenalized block. Fits reduce to the fully
  /// regularized interpolator on W.
  static DesignPartition without_unpenalized(Matrix w, RankTolerance tol = {});

  const Matrix& w() const noexcept { return w_; }
  const Matrix& t() const noexcept { return t_; }
  std::size_t n() const noexcept { return static_cast<std::size_t>(w_.rows()); }
  std::size_t q() const noexcept { return static_cast<std::size_t>(w_.cols()); }
  std::size_t m() const noexcept { return static_cast<std::size_t>(t_.cols()); }
  std::size_t p() const noexcept { return q() + m(); }
  bool has_unpenalized() const noexcept { return t_.cols() > 0; }
  const RankTolerance& tolerance() const noexcept { return tol_; }

  /// X = [W, T].
  Matrix x() const;

private:
  DesignPartition(Matrix w, Matrix t, RankTolerance tol, bool allow_empty_t);

  Matrix w_;
  Matrix t_;
  RankTolerance tol_;
};

struct FullFit {
  Vector beta_hat;
  double max_interp_residual = 0.0;
};

struct PartialFit {
  Vector lambda_hat;  // W coefficients, length q
  Vector tau_hat;     // T coefficients, length m
  double max_interp_residual = 0.0;
};

/// Algebraically equivalent expressions of the partial fit, used as
/// cross-checks against fit_partial.
struct PartialFitVariants {
  Vector lambda_remark1;  // P_{W^T} P^perp_{W^dagger T} W^dagger y
  Vector lambda_prep1;    // W^T G_W (y - T tau), tau from fit_partial
  Vector tau_prep2;       // (T^T G_W T)^dagger T^T G_W y
};

/// beta = X^dagger y. Requires rank(X) = n (AssumptionError "A1" otherwise).
FullFit fit_full(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                 const RankTolerance& tol = {});

PartialFit fit_partial(const DesignPartition& d, const Eigen::Ref<const Vector>& y);

PartialFitVariants fit_partial_variants(const DesignPartition& d, const Eigen::Ref<const Vector>& y);

double predict(const PartialFit& fit, const Eigen::Ref<const RowVector>& w_new,
               const Eigen::Ref<const RowVector>& t_new);

/// Partial-regularization coefficients for every column of a right-hand
/// side matrix: returns (Lambda q x k, Tau m x k). Column j equals
/// fit_partial on rhs.col(j).
struct PartialCoefficients {
  Matrix lambda;
  Matrix tau;
};
PartialCoefficients partial_coefficients(const DesignPartition& d,
                                         const Eigen::Ref<const Matrix>& rhs);

}  // namespace pregols
