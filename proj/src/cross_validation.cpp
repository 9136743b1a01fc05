#include "countreg/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "countreg/divergence.hpp"
#include "countreg/errors.hpp"
#include "countreg/random.hpp"

namespace countreg {

std::string method_name(Method m) {
  switch (m) {
    case Method::Lasso:
      return "lasso";
    case Method::Slope:
      return "slope";
    case Method::Forward:
      return "forward";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "lasso") return Method::Lasso;
  if (name == "slope") return Method::Slope;
  if (name == "forward") return Method::Forward;
  throw InvalidArgument("unknown method '" + name + "' (expected lasso, slope or forward)");
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw InvalidArgument("invalid grid specification");
  std::vector<double> g(static_cast<std::size_t>(count));
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) {
    g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (count - 1));
  }
  g.back() = hi;
  g.front() = lo;
  return g;
}

std::vector<double> default_grid(Method m) {
  return m == Method::Forward ? log_grid(0.1, 10.0, 20) : log_grid(0.01, 10.0, 20);
}

namespace {

GammaSequence gammas_for(Method method, Index p, double constant) {
  return method == Method::Slope ? slope_gammas(p, constant) : lasso_gammas(p, constant);
}

Index forward_cap(const Dataset& data, const MethodOptions& options) {
  const Index r = admissible_rank(data);
  return options.forward_max_size > 0 ? std::min(options.forward_max_size, r) : r;
}

}  // namespace

MethodFit fit_method(const GlmFamily& family, const Dataset& data, Method method, double constant,
                     const MethodOptions& options, const VectorXd& start) {
  if (method == Method::Forward) {
    PenaltySpec spec{PenaltyKind::Linear, constant, admissible_rank(data)};
    auto sel = forward_select(family, data, spec, forward_cap(data, options), options.selection);
    return {sel.beta, static_cast<Index>(sel.model.size()), true};
  }
  if (data.penalized_count() < 1) throw InvalidArgument("no penalized columns to fit");
  const auto g = gammas_for(method, data.penalized_count(), constant);
  FitResult fit = fista_fit(family, data, g, options.solver, start);
  return {fit.beta, fit.model_size(data), fit.converged};
}

MethodFit fit_method(const GlmFamily& family, const Dataset& data, Method method, double constant,
                     const MethodOptions& options) {
  return fit_method(family, data, method, constant, options, VectorXd::Zero(data.d()));
}

std::vector<int> make_folds(Index n, int k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  if (n < k) throw InvalidArgument("fewer observations than folds; some fold would be empty");
  RandomStream stream(seed, {0xF01D});
  const auto perm = stream.permutation(static_cast<std::size_t>(n));
  std::vector<int> folds(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < perm.size(); ++i) folds[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  return folds;
}

CvResult cross_validate(const GlmFamily& family, const Dataset& data, Method method,
                        std::vector<double> grid, const CvOptions& options) {
  if (grid.empty()) throw InvalidArgument("tuning grid is empty");
  for (double c : grid) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("grid values must be finite and ≥ 0");
  }
  CvResult out;
  out.grid = grid;
  out.fold_assignments = make_folds(data.n(), options.k_folds, options.seed);

  const std::size_t m = grid.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> total(m, 0.0);

  // Grid positions from the largest constant to the smallest (stable, so
  // equal constants keep their order).
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid[a] > grid[b]; });

  for (int f = 0; f < options.k_folds; ++f) {
    std::vector<Index> train_rows;
    std::vector<Index> test_rows;
    for (Index i = 0; i < data.n(); ++i) {
      (out.fold_assignments[static_cast<std::size_t>(i)] == f ? test_rows : train_rows).push_back(i);
    }
    if (test_rows.empty() || train_rows.empty()) throw InvalidArgument("empty cross-validation fold");

    MatrixXd Xtrain(static_cast<Index>(train_rows.size()), data.d());
    for (std::size_t r = 0; r < train_rows.size(); ++r) Xtrain.row(static_cast<Index>(r)) = data.X().row(train_rows[r]);
    VectorXd divisors = column_scales(Xtrain, data.has_intercept());
    // A column that vanishes on the training rows cannot be re-normalized;
    // leave it as is and let the fit treat it as uninformative.
    for (Index j = 0; j < divisors.size(); ++j) {
      if (divisors(j) == 0.0) divisors(j) = 1.0;
    }
    std::vector<double> fold_loss(m, inf);
    try {
      const Dataset train = data.subset_scaled(train_rows, divisors);
      const Dataset test = data.subset_scaled(test_rows, divisors);
      auto held_out = [&](const VectorXd& beta) {
        return test_kl(family, test.y(), test.X() * beta, options.method.solver.guard);
      };

      if (method == Method::Forward) {
        const double cmin = *std::min_element(grid.begin(), grid.end());
        const auto path = forward_path(family, train, forward_cap(train, options.method), cmin,
                                       options.method.selection);
        for (std::size_t g = 0; g < m; ++g) {
          std::size_t k = 0;
          while (k + 1 < path.size() && path[k].neg_loglik - path[k + 1].neg_loglik > grid[g]) ++k;
          fold_loss[g] = held_out(path[k].beta);
        }
      } else {
        VectorXd start = VectorXd::Zero(data.d());
        for (std::size_t g : order) {
          try {
            const MethodFit fit = fit_method(family, train, method, grid[g], options.method, start);
            fold_loss[g] = held_out(fit.beta);
            start = fit.beta;
          } catch (const Error&) {
            fold_loss[g] = inf;
          }
        }
      }
    } catch (const InvalidArgument&) {
      throw;
    } catch (const Error&) {
      // Whole-fold failure (e.g. the empty model cannot be fitted).
    }
    for (std::size_t g = 0; g < m; ++g) total[g] += fold_loss[g];
  }

  out.mean_loss.resize(m);
  for (std::size_t g = 0; g < m; ++g) out.mean_loss[g] = total[g] / options.k_folds;

  bool found = false;
  for (std::size_t g : order) {
    if (!std::isfinite(out.mean_loss[g])) continue;
    if (!found || out.mean_loss[g] < out.mean_loss[out.chosen_index]) {
      out.chosen_index = g;
      found = true;
    }
  }
  if (!found) throw NumericError("every grid value failed in cross-validation");
  out.chosen = grid[out.chosen_index];
  return out;
}

}  // namespace countreg
