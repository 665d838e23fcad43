#pragma once

// Closed-form leave-one-out (LOO) quantities for minimum-norm interpolators.
//
// For the partial fit, leaving out row i amounts to replacing W^dagger by
// W~_i = P^perp_{W^dagger e_i} W^dagger in the full-sample formulas:
//
//   lambda^(~i) = W^T W~_i^T P^perp_{W~_i T} W~_i y
//   tau^(~i)    = (W~_i T)^dagger W~_i y
//   eps~_i      = e_i^T diag(G_W)^-1 G_W (I - H_i) y,  H_i = T (W~_i T)^dagger W~_i
//
// Under full regularization the residual vector is diag(G_X)^-1 G_X y.

#include "pregols/interpolators.hpp"
#include "pregols/linalg.hpp"

#include <cstddef>

namespace pregols {

/// Per-index projector data. p_i is q x q, w_tilde is q x n.
struct LooProjector {
  std::size_t index = 0;
  Matrix p_i;
  Matrix w_tilde;
};

struct LooCoefficients {
  Vector lambda;
  Vector tau;
};

struct LooRecord {
  std::size_t index = 0;
  Vector lambda_loo;
  Vector tau_loo;
  double residual = 0.0;
};

/// Shared per-design factorizations for repeated LOO evaluation. Every
/// per-index method validates the leave-i-out ranks first and throws
/// AssumptionError("A1 (leave-one-out)") when they fail.
class LooContext {
public:
  explicit LooContext(const DesignPartition& d);

  const DesignPartition& design() const noexcept { return *d_; }
  const Matrix& w_pinv() const noexcept { return w_pinv_; }
  const Matrix& gram() const noexcept { return g_w_; }

  /// Checks rank(W_{~i}) = n - 1, rank(T_{~i}) = m and rank(W~_i T) = m.
  void validate(std::size_t i) const;

  LooProjector projector(std::size_t i) const;
  LooCoefficients coefficients(std::size_t i, const Eigen::Ref<const Vector>& y) const;

  /// Row vector a_i with eps~_i = a_i y, i.e. e_i^T diag(G_W)^-1 G_W (I - H_i).
  /// H_i is never formed.
  RowVector residual_row(std::size_t i) const;

  /// All residual rows stacked (n x n).
  Matrix residual_operator() const;

private:
  void check_index(std::size_t i) const;

  const DesignPartition* d_;
  Matrix w_pinv_;
  Matrix g_w_;
  Matrix w_pinv_t_;
  double w_smin_ = 0.0;
  double w_smax_ = 0.0;
};

LooCoefficients loo_fit(const DesignPartition& d, const Eigen::Ref<const Vector>& y,
                        std::size_t i);

double loo_residual_partial(const DesignPartition& d, const Eigen::Ref<const Vector>& y,
                            std::size_t i);

Vector loo_residuals_partial(const DesignPartition& d, const Eigen::Ref<const Vector>& y);

LooRecord loo_record(const DesignPartition& d, const Eigen::Ref<const Vector>& y, std::size_t i);

/// diag(G_X)^-1 G_X y. Requires rank(X) = n.
Vector loo_residuals_full(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                          const RankTolerance& tol = {});

/// Fully regularized leave-i-out coefficients as a rank-one correction of
/// the full-sample fit: (I - X^dagger e_i e_i^T X^dagger,T / G_ii) X^dagger y.
Vector loo_coefficients_full(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                             std::size_t i, const RankTolerance& tol = {});

/// [(X_{~i})^T X_{~i}]^dagger through the closed-form rank-one downdate
///   X^dagger { I - e_i g_i^T / G_ii - g_i e_i^T / G_ii + (g_i^T g_i / G_ii^2) e_i e_i^T } X^dagger,T
/// with g_i = G_X e_i.
Matrix gram_downdate(const Eigen::Ref<const Matrix>& x, std::size_t i,
                     const RankTolerance& tol = {});

/// Deletes row i and refits. The reference the closed forms are checked
/// against.
LooCoefficients brute_force_refit(const DesignPartition& d, const Eigen::Ref<const Vector>& y,
                                  std::size_t i);

namespace detail {

/// Q_i = e_i e_i^T G / G_ii (n x n), the row-space companion of P_i.
Matrix q_matrix(const Eigen::Ref<const Matrix>& gram, std::size_t i);

}  // namespace detail

}  // namespace pregols
