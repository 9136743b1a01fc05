#pragma once

#include <Eigen/Dense>

namespace countreg {

using Eigen::VectorXd;

/// Nonincreasing, nonnegative weights γ_1 ≥ … ≥ γ_d ≥ 0 for the sorted-ℓ1
/// norm, one per penalized coefficient. A constant sequence is the LASSO.
class GammaSequence {
 public:
  /// Throws InvalidArgument unless `gammas` is nonincreasing, nonnegative
  /// and finite.
  GammaSequence(VectorXd gammas, double scale);

  const VectorXd& gammas() const noexcept { return gammas_; }
  double scale() const noexcept { return scale_; }
  Eigen::Index size() const noexcept { return gammas_.size(); }
  double operator[](Eigen::Index j) const { return gammas_(j); }

  /// Same shape with every weight multiplied by `factor` ≥ 0.
  GammaSequence scaled(double factor) const;

 private:
  VectorXd gammas_;
  double scale_;
};

/// γ_j = scale·√(ln(2d/j)), j = 1..d.
GammaSequence slope_gammas(Eigen::Index d, double scale);

/// Constant scale·√(2 ln d); d = 1 uses √(2 ln 2) so the penalty is not
/// identically zero.
GammaSequence lasso_gammas(Eigen::Index d, double scale);

/// Σ_j γ_j |β|_(j) with |β|_(1) ≥ … ≥ |β|_(d).
double sorted_l1_norm(const VectorXd& beta, const GammaSequence& g);

/// argmin_v ½‖v − u‖² + t·Σ_j γ_j |v|_(j).
///
/// Sorts |u| (ties by index), subtracts tγ, pools adjacent violators until
/// the sorted sequence is nonincreasing, clips at zero and restores signs
/// and positions.
VectorXd prox_sorted_l1(const VectorXd& u, const GammaSequence& g, double t);

}  // namespace countreg
