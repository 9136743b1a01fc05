#pragma once

#include <limits>
#include <vector>

#include "countreg/dataset.hpp"
#include "countreg/family.hpp"
#include "countreg/irls.hpp"

namespace countreg {

enum class PenaltyKind {
  /// C·k·ln(de/k) for k < r and C·r at k = r.
  ComplexityNonlinear,
  /// C·k (AIC for C = 1, BIC for C = ln(n)/2, RIC for C = ln d).
  Linear,
};

struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::ComplexityNonlinear;
  double C = 1.0;
  /// Largest admissible model size (the rank of the design).
  Index r = 1;

  /// Throws InvalidArgument unless C ≥ 0 and 1 ≤ r.
  void validate() const;
};

/// Pen(k) for a model with k of d candidate features. Throws DomainError
/// when k is negative or exceeds spec.r.
double complexity_penalty(Index k, const PenaltySpec& spec, Index d);

/// Count of singular values above 1e-10·σ_max.
Index numerical_rank(const MatrixXd& X);

/// Largest model size worth considering: the rank of the design minus the
/// intercept, capped at the number of penalized columns (at least 1).
Index admissible_rank(const Dataset& data);

struct PathEntry {
  std::vector<Index> model;
  double criterion = std::numeric_limits<double>::infinity();
};

struct ModelSelectionResult {
  /// Selected penalized columns (dataset indices, ascending); the
  /// intercept is always fitted and never listed.
  std::vector<Index> model;
  VectorXd beta;
  /// −l(β̂_M) + Pen(|M|).
  double criterion_value = std::numeric_limits<double>::infinity();
  /// Every model evaluated, in evaluation order. Models whose restricted
  /// fit failed carry an infinite criterion.
  std::vector<PathEntry> path;
};

struct SelectionOptions {
  IrlsOptions irls{};
  /// Refuse enumerations larger than this.
  double model_budget = 1e6;
};

/// Minimizes −l(β̂_M) + Pen(|M|) over every model with at most
/// min(max_size, spec.r) features. Models are visited by size and then
/// lexicographically, and only strict improvements replace the incumbent,
/// so ties go to the sparser, then lexicographically smaller, model.
/// Throws BudgetExceeded when the enumeration is too large and
/// InvalidArgument when max_size > 15.
ModelSelectionResult exhaustive_select(const GlmFamily& family, const Dataset& data,
                                       const PenaltySpec& spec, Index max_size,
                                       const SelectionOptions& options = {});

/// One greedy step: the model after adding `added`, and its −l.
struct ForwardStep {
  Index added = -1;
  std::vector<Index> model;
  VectorXd beta;
  double neg_loglik = 0.0;
};

/// Greedy forward path: repeatedly adds the feature whose inclusion lowers
/// −l the most (ties to the smallest index), as long as that decrease
/// exceeds `min_improvement` and the model has fewer than max_size
/// features. Element 0 is the empty (intercept-only) model.
std::vector<ForwardStep> forward_path(const GlmFamily& family, const Dataset& data,
                                      Index max_size, double min_improvement,
                                      const SelectionOptions& options = {});

/// Stepwise minimization of −l(β̂_M) + C_F·|M|. Requires a linear penalty.
ModelSelectionResult forward_select(const GlmFamily& family, const Dataset& data,
                                    const PenaltySpec& spec, Index max_size,
                                    const SelectionOptions& options = {});

}  // namespace countreg
