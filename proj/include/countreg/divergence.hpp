#pragma once

#include "countreg/dataset.hpp"
#include "countreg/family.hpp"

namespace countreg {

// All divergences use the 0·ln 0 = 0 convention so that zero counts are
// legal first arguments.

/// KL(Pois(λ1) ‖ Pois(λ2)) = λ1 ln(λ1/λ2) − λ1 + λ2.
double kl_poisson(double lambda1, double lambda2);

/// KL between NB(α, α/(α+λ1)) and NB(α, α/(α+λ2)):
/// λ1 [ln(λ1/(λ1+α)) − ln(λ2/(λ2+α))] − α ln((λ1+α)/(λ2+α)).
double kl_nb(double lambda1, double lambda2, double alpha);

double kl_family(const GlmFamily& family, double lambda1, double lambda2);

/// Σ_i KL(y_i, exp(η̂_i)), half the deviance of the fit on (y, η̂).
///
/// The Poisson sum keeps the −y_i + exp(η̂_i) terms. They cancel in
/// aggregate only when the model was fitted with an intercept on the same
/// data, so they are never dropped here.
double test_kl(const GlmFamily& family, const VectorXd& y, const VectorXd& eta_hat,
               const LinearPredictorGuard& guard = {});

/// D* = (2/n)·test_kl.
double normalized_deviance(const GlmFamily& family, const VectorXd& y, const VectorXd& eta_hat,
                           const LinearPredictorGuard& guard = {});

}  // namespace countreg
