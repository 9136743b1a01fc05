#pragma once

#include <vector>

#include <Eigen/Dense>

namespace countreg {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Design matrix plus nonnegative integer counts.
///
/// When `has_intercept` is set, column 0 is the all-constant intercept
/// column; it is never rescaled and never penalized. Every other column
/// is divided by its Euclidean norm when the dataset is built with
/// `standardize`, and the divisors are kept in `column_norms` (1 for the
/// intercept and for unstandardized data).
///
/// Immutable after construction.
class Dataset {
 public:
  /// Validates counts and columns; throws InvalidArgument on violations.
  static Dataset create(MatrixXd X, VectorXd y, bool has_intercept, bool standardize);

  /// Wraps an already-scaled design with known divisors (used when a
  /// training subset is re-normalized or a saved model is re-applied).
  static Dataset with_norms(MatrixXd X, VectorXd y, VectorXd column_norms,
                            bool has_intercept);

  const MatrixXd& X() const noexcept { return X_; }
  const VectorXd& y() const noexcept { return y_; }
  const VectorXd& column_norms() const noexcept { return norms_; }
  bool has_intercept() const noexcept { return has_intercept_; }

  Index n() const noexcept { return X_.rows(); }
  Index d() const noexcept { return X_.cols(); }
  /// Index of the first penalized column (1 with an intercept, else 0).
  Index first_penalized() const noexcept { return has_intercept_ ? 1 : 0; }
  Index penalized_count() const noexcept { return d() - first_penalized(); }

  /// Rows `rows` of this dataset, with every non-intercept column
  /// rescaled to unit norm on that subset. `column_norms` of the result
  /// holds the cumulative divisors relative to the raw scale.
  Dataset subset_renormalized(const std::vector<Index>& rows) const;

  /// Rows `rows` with the columns scaled by `extra_divisors` (one per
  /// column; the intercept entry is ignored).
  Dataset subset_scaled(const std::vector<Index>& rows, const VectorXd& extra_divisors) const;

 private:
  Dataset(MatrixXd X, VectorXd y, VectorXd norms, bool has_intercept);

  MatrixXd X_;
  VectorXd y_;
  VectorXd norms_;
  bool has_intercept_ = false;
};

/// Euclidean norms of the columns of X that standardization divides by
/// (1 for the intercept column).
VectorXd column_scales(const MatrixXd& X, bool has_intercept);

/// X with column j divided by divisors(j) (intercept column untouched).
MatrixXd apply_column_scaling(const MatrixXd& X, const VectorXd& divisors, bool has_intercept);

}  // namespace countreg
