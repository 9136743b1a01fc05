#pragma once

#include <functional>
#include <vector>

#include "countreg/dataset.hpp"
#include "countreg/family.hpp"
#include "countreg/sorted_l1.hpp"

namespace countreg {

enum class StepMode {
  /// Fixed 1/L for the negative binomial, backtracking for the Poisson.
  Auto,
  FixedLipschitz,
  Backtracking,
};

/// One accepted proximal-gradient step: f(β⁺) and the quadratic model
/// f(w) + ∇f(w)ᵀ(β⁺−w) + ‖β⁺−w‖²/(2t) it was checked against.
struct StepRecord {
  int iteration;
  double step;
  double f_new;
  double model;
};

struct SolverConfig {
  int max_iter = 5000;
  /// Relative change of the penalized objective across `window` iterations.
  double tol = 1e-8;
  int window = 5;
  /// When positive, convergence also needs the gradient mapping
  /// ‖(w − β⁺)/t‖∞ at or below this value. The objective test alone stalls
  /// at rounding level while the gradient can still be ~√tol.
  double gradient_tol = 0.0;
  StepMode step_mode = StepMode::Auto;
  double backtrack_factor = 0.5;
  double initial_step = 1.0;
  LinearPredictorGuard guard{};
  /// Called after every accepted step; empty by default.
  std::function<void(const StepRecord&)> on_step{};
};

struct FitResult {
  VectorXd beta;
  /// Indices j with beta(j) ≠ 0 (the intercept included when nonzero).
  std::vector<Index> support;
  /// Penalized objective at the starting point and after each iteration.
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  double final_step = 0.0;

  double objective() const { return objective_trace.back(); }
  /// Nonzero coefficients excluding the intercept column.
  Index model_size(const Dataset& data) const;
};

/// −l(β) + Σ_j γ_j |β_pen|_(j), the intercept (if any) unpenalized.
double penalized_objective(const GlmFamily& family, const VectorXd& beta, const Dataset& data,
                           const GammaSequence& g, const LinearPredictorGuard& guard = {});

/// δ_{k+1} = (1 + √(1 + 4δ_k²)) / 2.
double next_momentum(double delta);

/// Accelerated proximal gradient (FISTA) started from zero.
FitResult fista_fit(const GlmFamily& family, const Dataset& data, const GammaSequence& g,
                    const SolverConfig& config = {});
/// Warm-started variant; `start` must have length d.
FitResult fista_fit(const GlmFamily& family, const Dataset& data, const GammaSequence& g,
                    const SolverConfig& config, const VectorXd& start);

/// Plain proximal gradient (ISTA); its objective trace never increases.
FitResult ista_fit(const GlmFamily& family, const Dataset& data, const GammaSequence& g,
                   const SolverConfig& config = {});
FitResult ista_fit(const GlmFamily& family, const Dataset& data, const GammaSequence& g,
                   const SolverConfig& config, const VectorXd& start);

/// Largest violation of the optimality conditions 0 ∈ ∇f(β) + ∂J(β).
///
/// With s = −∇f(β) restricted to penalized coordinates and the positions
/// ordered by descending |β|, every cluster of tied nonzero |β| must have
/// sign-aligned components whose sorted partial sums stay below the
/// matching partial sums of γ and whose totals are equal; the zero block
/// needs only the inequality on |s|. The intercept gradient must vanish.
double kkt_residual(const VectorXd& beta, const GlmFamily& family, const Dataset& data,
                    const GammaSequence& g, const LinearPredictorGuard& guard = {});

}  // namespace countreg
