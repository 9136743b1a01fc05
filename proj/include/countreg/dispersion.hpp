#pragma once

#include "countreg/dataset.hpp"

namespace countreg {

struct AlphaEstimate {
  double alpha = 0.0;
  /// Set when the Pearson equation has no root below the upper bracket,
  /// i.e. the data show no overdispersion relative to the Poisson.
  bool effectively_poisson = false;
};

struct AlphaBracket {
  double lower = 1e-4;
  double upper = 1e8;
};

/// Method-of-moments dispersion estimate. Solves
///   Σ (y_i − μ_i)² / (μ_i + μ_i²/α) = n − p
/// for α by bisection in log α, where μ = exp(Xβ) and p counts the
/// nonzero entries of `beta`. Throws InsufficientData when n ≤ p.
AlphaEstimate estimate_alpha_mom(const Dataset& data, const VectorXd& beta,
                                 const AlphaBracket& bracket = {});

/// Same equation from fitted means directly.
AlphaEstimate estimate_alpha_mom(const VectorXd& y, const VectorXd& mu, Index p,
                                 const AlphaBracket& bracket = {});

}  // namespace countreg
