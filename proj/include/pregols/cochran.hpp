#pragma once

// Cochran's formula for partially regularized interpolators.
//
// With W = [Z, U] split into retained (Z) and omitted (U) penalized blocks,
// three regressions are fitted, all leaving T unpenalized:
//
//   long:  y ~ Z alpha + U gamma + T tau      (penalty |alpha|^2 + |gamma|^2)
//   short: y ~ Z alpha + T tau                (penalty |alpha|^2)
//   aux:   U ~ Z Delta + T delta              (penalty |Delta|_F^2)
//
// The short coefficients equal long + aux * gamma. The image identity
// Z alpha_s + T tau_s = Z(alpha + Delta gamma) + T(tau + delta gamma) holds
// for every element of the three solution sets, not only the minimum-norm
// ones.

#include "pregols/interpolators.hpp"
#include "pregols/linalg.hpp"

#include <random>

namespace pregols {

/// Validated (Z, U, T) triple. Construction enforces rank(Z) = n <= l,
/// rank(U) = r < n, rank(T) = m < n; violations raise AssumptionError("A2").
class CochranDesign {
public:
  CochranDesign(Matrix z, Matrix u, Matrix t, RankTolerance tol = {});

  const Matrix& z() const noexcept { return z_; }
  const Matrix& u() const noexcept { return u_; }
  const Matrix& t() const noexcept { return t_; }
  std::size_t n() const noexcept { return static_cast<std::size_t>(z_.rows()); }
  const RankTolerance& tolerance() const noexcept { return tol_; }

  /// [Z, U] as the penalized block, T unpenalized.
  DesignPartition long_partition() const;
  /// Z penalized, T unpenalized.
  DesignPartition short_partition() const;

private:
  Matrix z_;
  Matrix u_;
  Matrix t_;
  RankTolerance tol_;
};

struct LongFit {
  Vector alpha_hat;
  Vector gamma_hat;
  Vector tau_hat;
};

struct ShortFit {
  Vector alpha_tilde;
  Vector tau_tilde;
};

struct AuxFit {
  Matrix delta_mat;    // l x r
  Matrix delta_small;  // m x r
};

struct CochranFits {
  LongFit long_fit;
  ShortFit short_fit;
  AuxFit aux_fit;
};

LongFit fit_long(const CochranDesign& d, const Eigen::Ref<const Vector>& y);
ShortFit fit_short(const Eigen::Ref<const Matrix>& z, const Eigen::Ref<const Matrix>& t,
                   const Eigen::Ref<const Vector>& y, const RankTolerance& tol = {});
AuxFit fit_aux(const Eigen::Ref<const Matrix>& z, const Eigen::Ref<const Matrix>& t,
               const Eigen::Ref<const Matrix>& u, const RankTolerance& tol = {});

CochranFits fit_all(const CochranDesign& d, const Eigen::Ref<const Vector>& y);

struct CochranGaps {
  double image_gap = 0.0;  // max-norm of the image identity residual
  double coeff_gap = 0.0;  // max-norm of the coefficient identity residual
};

/// Fits the three canonical solutions and evaluates both identities.
CochranGaps cochran_check(const CochranDesign& d, const Eigen::Ref<const Vector>& y);

/// Image identity residual for arbitrary (not necessarily minimum-norm)
/// members of the three solution sets.
double image_gap(const CochranDesign& d, const CochranFits& fits);

/// Coefficient identity residual; only meaningful for canonical fits.
double coeff_gap(const CochranFits& fits);

/// Moves each fit to another member of its solution set by adding a
/// Gaussian vector projected onto the null space of the stacked design.
CochranFits perturb_within_solution_sets(const CochranDesign& d, const CochranFits& fits,
                                         std::mt19937_64& rng, double scale = 1.0);

struct OvbDecomposition {
  double tau_long_d = 0.0;   // D coefficient of the long fit
  double tau_short_d = 0.0;  // D coefficient of the short fit
  double bias = 0.0;         // tau_short_d - tau_long_d
  Vector impact;             // gamma_hat
  RowVector imbalance;       // D row of delta_small
  /// |bias - imbalance * impact|; zero up to rounding.
  double decomposition_gap = 0.0;
};

/// Omitted-variable-bias split for T = [D, 1] with binary D. The corollary's
/// "appropriate conditions" are taken to be the A2 rank conditions with
/// rank(T) = 2, so D must be non-constant.
OvbDecomposition ovb_decompose(const CochranDesign& d, const Eigen::Ref<const Vector>& y);

}  // namespace pregols
