#pragma once

#include "countreg/dataset.hpp"
#include "countreg/family.hpp"

namespace countreg {

// Negative log-likelihoods are reported without their β-free constants:
// ln(y_i!) for the Poisson, and the ln Γ(y_i+α) − ln Γ(α) − ln(y_i!)
// terms for the negative binomial. The NB part keeps α ln α so that it
// reads as Σ (y_i+α) ln(λ_i+α) − y_i η_i − α ln α. Linear predictors are
// clamped to ±eta_cap everywhere they appear.

/// −l(β) evaluated from linear predictors η = Xβ.
double neg_loglik_eta(const GlmFamily& family, const VectorXd& eta, const VectorXd& y,
                      const LinearPredictorGuard& guard = {});

/// ∂(−l)/∂η_i, i.e. λ_i − y_i (Poisson) or α(λ_i − y_i)/(λ_i + α) (NB).
VectorXd neg_loglik_eta_derivative(const GlmFamily& family, const VectorXd& eta,
                                   const VectorXd& y, const LinearPredictorGuard& guard = {});

double neg_loglik(const GlmFamily& family, const VectorXd& beta, const Dataset& data,
                  const LinearPredictorGuard& guard = {});

VectorXd neg_loglik_gradient(const GlmFamily& family, const VectorXd& beta, const Dataset& data,
                             const LinearPredictorGuard& guard = {});

/// Largest eigenvalue of XᵗX by power iteration, to relative tolerance `tol`.
double largest_eigenvalue_gram(const MatrixXd& X, double tol = 1e-8, int max_iter = 100000);

/// Step-size constant for the NB gradient, ((α + ȳ)/(4α))·λ_max(XᵗX).
/// Throws UnsupportedFamily for the Poisson, whose gradient has no global
/// Lipschitz constant.
double lipschitz_bound(const GlmFamily& family, const Dataset& data);

}  // namespace countreg
