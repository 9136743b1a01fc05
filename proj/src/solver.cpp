#include "countreg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "countreg/errors.hpp"
#include "countreg/likelihood.hpp"

namespace countreg {

Index FitResult::model_size(const Dataset& data) const {
  Index count = 0;
  for (Index j : support) count += j >= data.first_penalized() ? 1 : 0;
  return count;
}

double penalized_objective(const GlmFamily& family, const VectorXd& beta, const Dataset& data,
                           const GammaSequence& g, const LinearPredictorGuard& guard) {
  const Index p0 = data.first_penalized();
  return neg_loglik(family, beta, data, guard) +
         sorted_l1_norm(beta.segment(p0, data.penalized_count()), g);
}

double next_momentum(double delta) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * delta * delta)); }

namespace {

// Shared proximal-gradient loop; `accelerate` switches FISTA extrapolation on.
class ProximalGradient {
 public:
  ProximalGradient(const GlmFamily& family, const Dataset& data, const GammaSequence& g,
                   const SolverConfig& config)
      : family_(family), data_(data), g_(g), config_(config) {
    if (g.size() != data.penalized_count()) {
      throw InvalidArgument("penalty has " + std::to_string(g.size()) + " weights for " +
                            std::to_string(data.penalized_count()) + " penalized coefficients");
    }
    if (config.max_iter < 1 || !(config.tol > 0.0) || config.window < 1) {
      throw InvalidArgument("solver needs max_iter ≥ 1, tol > 0 and window ≥ 1");
    }
    if (!(config.backtrack_factor > 0.0 && config.backtrack_factor < 1.0)) {
      throw InvalidArgument("backtrack factor must lie in (0, 1)");
    }
    StepMode mode = config.step_mode;
    if (mode == StepMode::Auto) {
      mode = family.is_poisson() ? StepMode::Backtracking : StepMode::FixedLipschitz;
    }
    if (mode == StepMode::FixedLipschitz) {
      step_ = 1.0 / lipschitz_bound(family, data);
    } else {
      if (!(config.initial_step > 0.0)) throw InvalidArgument("initial step must be positive");
      step_ = config.initial_step;
    }
  }

  FitResult run(const VectorXd& start, bool accelerate) {
    const Index d = data_.d();
    if (start.size() != d) throw InvalidArgument("warm start has the wrong length");
    const Index p0 = data_.first_penalized();
    const Index np = data_.penalized_count();
    const auto& guard = config_.guard;
    const VectorXd& y = data_.y();
    const MatrixXd& X = data_.X();

    FitResult result;
    VectorXd beta = start;
    VectorXd w = start;
    double delta = 1.0;

    VectorXd eta_beta = X * beta;
    double f_beta = neg_loglik_eta(family_, eta_beta, y, guard);
    double obj = f_beta + sorted_l1_norm(beta.segment(p0, np), g_);
    if (!std::isfinite(obj)) throw NumericError("non-finite objective at the starting point");
    result.objective_trace.push_back(obj);

    VectorXd eta_w = eta_beta;
    double f_w = f_beta;
    for (int k = 0; k < config_.max_iter; ++k) {
      const VectorXd grad = X.transpose() * neg_loglik_eta_derivative(family_, eta_w, y, guard);

      VectorXd next(d);
      VectorXd eta_next;
      double f_next = 0.0;
      double model = 0.0;
      for (;;) {
        const VectorXd u = w - step_ * grad;
        next.head(p0) = u.head(p0);
        next.segment(p0, np) = prox_sorted_l1(u.segment(p0, np), g_, step_);
        const VectorXd diff = next - w;
        eta_next = X * next;
        f_next = neg_loglik_eta(family_, eta_next, y, guard);
        model = f_w + grad.dot(diff) + diff.squaredNorm() / (2.0 * step_);
        // Rounding slack so that steps at machine precision are accepted.
        const double slack = 1e-12 * std::max(1.0, std::abs(f_w));
        if (std::isfinite(f_next) && f_next <= model + slack) break;
        step_ *= config_.backtrack_factor;
        if (step_ < 1e-300) throw NumericError("step size underflow in proximal gradient");
      }
      if (config_.on_step) config_.on_step({k, step_, f_next, model});
      const double mapping = (next - w).cwiseAbs().maxCoeff() / step_;

      const double obj_next = f_next + sorted_l1_norm(next.segment(p0, np), g_);
      if (!std::isfinite(obj_next)) throw NumericError("non-finite penalized objective");

      if (accelerate) {
        const double delta_next = next_momentum(delta);
        w = next + ((delta - 1.0) / delta_next) * (next - beta);
        delta = delta_next;
        eta_w = X * w;
        f_w = neg_loglik_eta(family_, eta_w, y, guard);
      } else {
        w = next;
        eta_w = eta_next;
        f_w = f_next;
      }
      beta = std::move(next);
      result.objective_trace.push_back(obj_next);
      result.iterations = k + 1;

      // Spread of the last window+1 objective values, so a momentum
      // oscillation that happens to revisit an old value does not stop us.
      const std::size_t len = result.objective_trace.size();
      const std::size_t win = static_cast<std::size_t>(config_.window);
      if (len > win) {
        const auto first = result.objective_trace.end() - static_cast<std::ptrdiff_t>(win + 1);
        const auto [lo, hi] = std::minmax_element(first, result.objective_trace.end());
        if (*hi - *lo <= config_.tol * std::max(1.0, std::abs(obj_next)) &&
            (config_.gradient_tol <= 0.0 || mapping <= config_.gradient_tol)) {
          result.converged = true;
          break;
        }
      }
    }

    result.beta = std::move(beta);
    for (Index j = 0; j < d; ++j) {
      if (result.beta(j) != 0.0) result.support.push_back(j);
    }
    result.final_step = step_;
    return result;
  }

 private:
  const GlmFamily& family_;
  const Dataset& data_;
  const GammaSequence& g_;
  const SolverConfig& config_;
  double step_ = 1.0;
};

}  // namespace

FitResult fista_fit(const GlmFamily& family, const Dataset& data, const GammaSequence& g,
                    const SolverConfig& config, const VectorXd& start) {
  return ProximalGradient(family, data, g, config).run(start, true);
}

FitResult fista_fit(const GlmFamily& family, const Dataset& data, const GammaSequence& g,
                    const SolverConfig& config) {
  return fista_fit(family, data, g, config, VectorXd::Zero(data.d()));
}

FitResult ista_fit(const GlmFamily& family, const Dataset& data, const GammaSequence& g,
                   const SolverConfig& config, const VectorXd& start) {
  return ProximalGradient(family, data, g, config).run(start, false);
}

FitResult ista_fit(const GlmFamily& family, const Dataset& data, const GammaSequence& g,
                   const SolverConfig& config) {
  return ista_fit(family, data, g, config, VectorXd::Zero(data.d()));
}

double kkt_residual(const VectorXd& beta, const GlmFamily& family, const Dataset& data,
                    const GammaSequence& g, const LinearPredictorGuard& guard) {
  if (g.size() != data.penalized_count()) throw InvalidArgument("penalty length mismatch");
  const VectorXd grad = neg_loglik_gradient(family, beta, data, guard);
  const Index p0 = data.first_penalized();
  const Index np = data.penalized_count();

  double residual = 0.0;
  for (Index j = 0; j < p0; ++j) residual = std::max(residual, std::abs(grad(j)));

  const VectorXd b = beta.segment(p0, np);
  const VectorXd s = -grad.segment(p0, np);
  std::vector<Index> order(static_cast<std::size_t>(np));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index c) { return std::abs(b(a)) > std::abs(b(c)); });

  const double tie_tol = 1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff());
  Index start = 0;
  while (start < np) {
    const double level = std::abs(b(order[static_cast<std::size_t>(start)]));
    Index end = start + 1;
    if (level == 0.0) {
      end = np;
    } else {
      while (end < np && std::abs(std::abs(b(order[static_cast<std::size_t>(end)])) - level) <= tie_tol) {
        ++end;
      }
    }
    std::vector<double> comp;
    for (Index pos = start; pos < end; ++pos) {
      const Index i = order[static_cast<std::size_t>(pos)];
      comp.push_back(level == 0.0 ? std::abs(s(i)) : (b(i) > 0.0 ? s(i) : -s(i)));
    }
    std::sort(comp.begin(), comp.end(), std::greater<>());
    double lhs = 0.0;
    double rhs = 0.0;
    for (std::size_t m = 0; m < comp.size(); ++m) {
      lhs += comp[m];
      rhs += g[start + static_cast<Index>(m)];
      residual = std::max(residual, lhs - rhs);
    }
    if (level != 0.0) residual = std::max(residual, std::abs(lhs - rhs));
    start = end;
  }
  return residual;
}

}  // namespace countreg
