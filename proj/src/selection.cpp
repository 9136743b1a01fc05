#include "countreg/selection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "countreg/errors.hpp"
#include "countreg/likelihood.hpp"

namespace countreg {

void PenaltySpec::validate() const {
  if (!(C >= 0.0) || std::isnan(C)) throw InvalidArgument("penalty constant must be nonnegative");
  if (r < 1) throw InvalidArgument("penalty rank must be at least 1");
}

double complexity_penalty(Index k, const PenaltySpec& spec, Index d) {
  spec.validate();
  if (k < 0 || k > spec.r) {
    throw DomainError("model size " + std::to_string(k) + " outside [0, " +
                      std::to_string(spec.r) + "]");
  }
  if (k == 0) return 0.0;
  const double kk = static_cast<double>(k);
  if (spec.kind == PenaltyKind::Linear) return spec.C * kk;
  if (k == spec.r) return spec.C * kk;
  return spec.C * kk * std::log(std::exp(1.0) * static_cast<double>(d) / kk);
}

Index numerical_rank(const MatrixXd& X) {
  if (X.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXd> svd(X);
  const VectorXd& s = svd.singularValues();
  const double cut = 1e-10 * s(0);
  return static_cast<Index>((s.array() > cut).count());
}

Index admissible_rank(const Dataset& data) {
  const Index r = numerical_rank(data.X()) - data.first_penalized();
  return std::max<Index>(1, std::min(r, data.penalized_count()));
}

namespace {

struct ModelFit {
  VectorXd beta;
  double neg_loglik = std::numeric_limits<double>::infinity();
  bool ok = false;
};

ModelFit fit_model(const GlmFamily& family, const Dataset& data, const std::vector<Index>& model,
                   const IrlsOptions& options) {
  ModelFit out;
  try {
    out.beta = irls_fit(family, data, model, options);
    out.neg_loglik = neg_loglik(family, out.beta, data, options.guard);
    out.ok = std::isfinite(out.neg_loglik);
  } catch (const RankDeficient&) {
  } catch (const ConvergenceError&) {
  } catch (const NumericError&) {
  }
  return out;
}

double binomial(Index n, Index k) {
  double c = 1.0;
  for (Index i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

}  // namespace

ModelSelectionResult exhaustive_select(const GlmFamily& family, const Dataset& data,
                                       const PenaltySpec& spec, Index max_size,
                                       const SelectionOptions& options) {
  spec.validate();
  if (max_size < 0 || max_size > 15) {
    throw InvalidArgument("exhaustive search supports model sizes up to 15");
  }
  const Index p0 = data.first_penalized();
  const Index p = data.penalized_count();
  const Index kmax = std::min({max_size, spec.r, p});

  double total = 0.0;
  for (Index k = 0; k <= kmax; ++k) total += binomial(p, k);
  if (total > options.model_budget) {
    throw BudgetExceeded("exhaustive search would fit " + std::to_string(total) +
                         " models; use the SLOPE or LASSO surrogate instead");
  }

  ModelSelectionResult best;
  std::vector<Index> combo;
  for (Index k = 0; k <= kmax; ++k) {
    // Lexicographic enumeration of k-subsets of {p0, …, p0+p-1}.
    combo.resize(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) combo[static_cast<std::size_t>(i)] = p0 + i;
    for (;;) {
      const ModelFit fit = fit_model(family, data, combo, options.irls);
      const double crit =
          fit.ok ? fit.neg_loglik + complexity_penalty(k, spec, p) : std::numeric_limits<double>::infinity();
      best.path.push_back({combo, crit});
      if (crit < best.criterion_value) {
        best.criterion_value = crit;
        best.model = combo;
        best.beta = fit.beta;
      }
      Index i = k - 1;
      while (i >= 0 && combo[static_cast<std::size_t>(i)] == p0 + p - k + i) --i;
      if (i < 0) break;
      ++combo[static_cast<std::size_t>(i)];
      for (Index j = i + 1; j < k; ++j) {
        combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }
  if (!std::isfinite(best.criterion_value)) {
    throw NumericError("no candidate model could be fitted");
  }
  return best;
}

std::vector<ForwardStep> forward_path(const GlmFamily& family, const Dataset& data,
                                      Index max_size, double min_improvement,
                                      const SelectionOptions& options) {
  const Index p0 = data.first_penalized();
  const Index p = data.penalized_count();
  const Index kmax = std::min(max_size, p);

  std::vector<ForwardStep> path;
  {
    const ModelFit empty = fit_model(family, data, {}, options.irls);
    if (!empty.ok) throw NumericError("the empty model could not be fitted");
    path.push_back({-1, {}, empty.beta, empty.neg_loglik});
  }
  std::vector<bool> used(static_cast<std::size_t>(p), false);
  while (static_cast<Index>(path.back().model.size()) < kmax) {
    const ForwardStep& current = path.back();
    ForwardStep best;
    best.neg_loglik = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < p; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      std::vector<Index> candidate = current.model;
      candidate.insert(std::upper_bound(candidate.begin(), candidate.end(), p0 + j), p0 + j);
      ModelFit fit = fit_model(family, data, candidate, options.irls);
      if (fit.ok && fit.neg_loglik < best.neg_loglik) {
        best = {p0 + j, std::move(candidate), std::move(fit.beta), fit.neg_loglik};
      }
    }
    if (best.added < 0 || !(current.neg_loglik - best.neg_loglik > min_improvement)) break;
    used[static_cast<std::size_t>(best.added - p0)] = true;
    path.push_back(std::move(best));
  }
  return path;
}

ModelSelectionResult forward_select(const GlmFamily& family, const Dataset& data,
                                    const PenaltySpec& spec, Index max_size,
                                    const SelectionOptions& options) {
  spec.validate();
  if (spec.kind != PenaltyKind::Linear) {
    throw InvalidArgument("forward selection approximates a linear penalty only");
  }
  const Index kmax = std::min(max_size, spec.r);
  // Adding one feature changes C_F·|M| by exactly C_F, so the criterion
  // drops iff −l drops by more than C_F.
  const auto steps = forward_path(family, data, kmax, spec.C, options);
  ModelSelectionResult out;
  for (const ForwardStep& s : steps) {
    const double crit = s.neg_loglik + spec.C * static_cast<double>(s.model.size());
    out.path.push_back({s.model, crit});
  }
  out.model = steps.back().model;
  out.beta = steps.back().beta;
  out.criterion_value = out.path.back().criterion;
  return out;
}

}  // namespace countreg
