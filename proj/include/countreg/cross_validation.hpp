#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "countreg/dataset.hpp"
#include "countreg/family.hpp"
#include "countreg/selection.hpp"
#include "countreg/solver.hpp"

namespace countreg {

enum class Method { Lasso, Slope, Forward };

std::string method_name(Method m);
/// Parses "lasso", "slope" or "forward"; throws InvalidArgument otherwise.
Method parse_method(const std::string& name);

/// `count` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);

/// 20 log-spaced constants: [0.01, 10] for the LASSO/SLOPE scales and
/// [0.1, 10] for the forward-selection constant C_F.
std::vector<double> default_grid(Method m);

struct MethodOptions {
  SolverConfig solver{};
  SelectionOptions selection{};
  /// Forward selection stops at this many features; ≤ 0 means the
  /// admissible rank of the training design.
  Index forward_max_size = 0;
};

struct MethodFit {
  VectorXd beta;
  Index model_size = 0;
  bool converged = true;
};

/// Fits one method at one tuning constant: γ = C·√(ln(2d/j)) for SLOPE,
/// C·√(2 ln d) for the LASSO, and Pen(|M|) = C·|M| for forward selection.
MethodFit fit_method(const GlmFamily& family, const Dataset& data, Method method, double constant,
                     const MethodOptions& options = {});

/// Warm-started variant for the convex methods (ignored for forward).
MethodFit fit_method(const GlmFamily& family, const Dataset& data, Method method, double constant,
                     const MethodOptions& options, const VectorXd& start);

struct CvOptions {
  int k_folds = 5;
  std::uint64_t seed = 0;
  MethodOptions method{};
};

struct CvResult {
  std::vector<double> grid;
  /// Mean over folds of the held-out test_kl, per grid value; +∞ where a
  /// fit failed.
  std::vector<double> mean_loss;
  double chosen = 0.0;
  std::size_t chosen_index = 0;
  /// Fold (0-based) of each observation.
  std::vector<int> fold_assignments;
};

/// Seeded partition of n observations into k near-equal folds.
std::vector<int> make_folds(Index n, int k, std::uint64_t seed);

/// K-fold cross-validation of a tuning constant.
///
/// Each training split has its non-intercept columns re-scaled to unit
/// norm and the held-out split is scaled with the same divisors. The
/// convex methods walk the grid from the largest constant down with warm
/// starts; forward selection computes one greedy path per fold and reads
/// every constant off it. Ties in the mean loss go to the larger constant.
CvResult cross_validate(const GlmFamily& family, const Dataset& data, Method method,
                        std::vector<double> grid, const CvOptions& options = {});

}  // namespace countreg
