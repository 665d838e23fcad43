#pragma once

// Dense real-matrix primitives shared by every estimator in the library.
//
// All rank decisions go through a single RankTolerance: a singular value s
// of an r x c matrix counts as nonzero iff s > relative * s_max, with
// relative defaulting to max(r, c) * machine epsilon.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>

namespace pregols {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

class RankTolerance {
public:
  RankTolerance() = default;
  /// Fixed relative cutoff; must be > 0.
  explicit RankTolerance(double relative);

  /// Absolute singular-value cutoff for an r x c matrix whose largest
  /// singular value is s_max.
  double cutoff(std::size_t rows, std::size_t cols, double s_max) const;

  /// Relative factor in use for an r x c matrix.
  double relative(std::size_t rows, std::size_t cols) const;

  bool is_default() const noexcept { return !relative_; }

private:
  std::optional<double> relative_;
};

/// Throws InvalidInputError if any entry is NaN or infinite.
template <class Derived>
void require_finite(const Eigen::DenseBase<Derived>& m, const char* what = "input");

/// Moore-Penrose pseudoinverse through a thin SVD with singular values at
/// or below the cutoff treated as zero.
Matrix pinv(const Eigen::Ref<const Matrix>& m, const RankTolerance& tol = {});

/// P_M = M M^dagger, the orthogonal projector onto colsp(M).
Matrix projector(const Eigen::Ref<const Matrix>& m, const RankTolerance& tol = {});

/// I - P_M.
Matrix complement_projector(const Eigen::Ref<const Matrix>& m, const RankTolerance& tol = {});

/// G_M = (M M^T)^dagger, the inverse Gram matrix of the rows of M.
Matrix gram_inverse(const Eigen::Ref<const Matrix>& m, const RankTolerance& tol = {});

/// Number of singular values above the cutoff.
std::size_t numeric_rank(const Eigen::Ref<const Matrix>& m, const RankTolerance& tol = {});

/// Singular values in decreasing order.
Vector singular_values(const Eigen::Ref<const Matrix>& m);

/// [a, b] concatenated column-wise; row counts must agree.
Matrix hstack(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b);

/// Copy of m with row i removed.
Matrix drop_row(const Eigen::Ref<const Matrix>& m, std::size_t i);
Vector drop_entry(const Eigen::Ref<const Vector>& v, std::size_t i);

/// Max-norm of (a - b) divided by max(1, max-norm of b). Used as the
/// scaled discrepancy throughout the tests and the acceptance suite.
double scaled_diff(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b);

namespace detail {
[[noreturn]] void throw_non_finite(const char* what);
}  // namespace detail

template <class Derived>
void require_finite(const Eigen::DenseBase<Derived>& m, const char* what) {
  if (!m.allFinite()) detail::throw_non_finite(what);
}

}  // namespace pregols
