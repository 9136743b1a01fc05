#pragma once

#include <vector>

#include "countreg/dataset.hpp"
#include "countreg/family.hpp"

namespace countreg {

struct IrlsOptions {
  int max_iter = 100;
  /// Relative change of −l between iterations.
  double tol = 1e-10;
  /// Euclidean norm of the gradient restricted to the fitted columns.
  double gradient_tol = 1e-8;
  int max_halvings = 20;
  LinearPredictorGuard guard{};
};

/// Restricted maximum likelihood over the columns in `support` (the
/// intercept column is always added when the dataset has one).
///
/// Fisher scoring with step-halving whenever −l would increase. Returns a
/// length-d vector that is zero off the fitted columns. Throws
/// RankDeficient when the fitted columns are collinear and
/// ConvergenceError (carrying the last iterate) when max_iter is hit.
VectorXd irls_fit(const GlmFamily& family, const Dataset& data, const std::vector<Index>& support,
                  const IrlsOptions& options = {});

/// Columns fitted by irls_fit for `support`: sorted, de-duplicated, with
/// the intercept prepended when present.
std::vector<Index> fitted_columns(const Dataset& data, const std::vector<Index>& support);

}  // namespace countreg
