#include "countreg/dataset.hpp"

#include <cmath>
#include <string>

#include "countreg/errors.hpp"

namespace countreg {

namespace {

void validate(const MatrixXd& X, const VectorXd& y, bool has_intercept) {
  if (X.rows() < 1 || X.cols() < 1) {
    throw InvalidArgument("dataset needs at least one row and one column");
  }
  if (y.size() != X.rows()) {
    throw InvalidArgument("response length " + std::to_string(y.size()) +
                          " does not match " + std::to_string(X.rows()) + " rows");
  }
  if (!X.allFinite()) {
    throw InvalidArgument("design matrix contains non-finite values");
  }
  for (Index i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y(i)) || y(i) < 0.0 || y(i) != std::floor(y(i))) {
      throw InvalidArgument("response " + std::to_string(i + 1) +
                            " is not a nonnegative integer");
    }
  }
  for (Index j = 0; j < X.cols(); ++j) {
    if ((X.col(j).array() == 0.0).all()) {
      throw InvalidArgument("column " + std::to_string(j + 1) + " is entirely zero");
    }
  }
  if (has_intercept) {
    const double c = X(0, 0);
    if ((X.col(0).array() != c).any()) {
      throw InvalidArgument("intercept column is not constant");
    }
  }
}

}  // namespace

Dataset::Dataset(MatrixXd X, VectorXd y, VectorXd norms, bool has_intercept)
    : X_(std::move(X)), y_(std::move(y)), norms_(std::move(norms)), has_intercept_(has_intercept) {}

VectorXd column_scales(const MatrixXd& X, bool has_intercept) {
  VectorXd norms = X.colwise().norm().transpose();
  if (has_intercept && norms.size() > 0) norms(0) = 1.0;
  return norms;
}

MatrixXd apply_column_scaling(const MatrixXd& X, const VectorXd& divisors, bool has_intercept) {
  if (divisors.size() != X.cols()) {
    throw InvalidArgument("column scaling has " + std::to_string(divisors.size()) +
                          " entries for " + std::to_string(X.cols()) + " columns");
  }
  MatrixXd out = X;
  for (Index j = has_intercept ? 1 : 0; j < X.cols(); ++j) out.col(j) /= divisors(j);
  return out;
}

Dataset Dataset::create(MatrixXd X, VectorXd y, bool has_intercept, bool standardize) {
  validate(X, y, has_intercept);
  VectorXd norms = VectorXd::Ones(X.cols());
  if (standardize) {
    norms = column_scales(X, has_intercept);
    X = apply_column_scaling(X, norms, has_intercept);
  }
  return Dataset(std::move(X), std::move(y), std::move(norms), has_intercept);
}

Dataset Dataset::with_norms(MatrixXd X, VectorXd y, VectorXd column_norms, bool has_intercept) {
  validate(X, y, has_intercept);
  if (column_norms.size() != X.cols() || (column_norms.array() <= 0.0).any()) {
    throw InvalidArgument("column norms must be positive, one per column");
  }
  return Dataset(std::move(X), std::move(y), std::move(column_norms), has_intercept);
}

Dataset Dataset::subset_scaled(const std::vector<Index>& rows,
                               const VectorXd& extra_divisors) const {
  MatrixXd Xs(static_cast<Index>(rows.size()), d());
  VectorXd ys(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Xs.row(static_cast<Index>(r)) = X_.row(rows[r]);
    ys(static_cast<Index>(r)) = y_(rows[r]);
  }
  Xs = apply_column_scaling(Xs, extra_divisors, has_intercept_);
  VectorXd norms = norms_.cwiseProduct(extra_divisors);
  if (has_intercept_) norms(0) = norms_(0);
  return with_norms(std::move(Xs), std::move(ys), std::move(norms), has_intercept_);
}

Dataset Dataset::subset_renormalized(const std::vector<Index>& rows) const {
  MatrixXd Xs(static_cast<Index>(rows.size()), d());
  for (std::size_t r = 0; r < rows.size(); ++r) Xs.row(static_cast<Index>(r)) = X_.row(rows[r]);
  return subset_scaled(rows, column_scales(Xs, has_intercept_));
}

}  // namespace countreg
