#include "countreg/dispersion.hpp"

#include <cmath>
#include <string>

#include "countreg/errors.hpp"
#include "countreg/family.hpp"

namespace countreg {

namespace {

double pearson_statistic(const VectorXd& y, const VectorXd& mu, double alpha) {
  double total = 0.0;
  for (Index i = 0; i < y.size(); ++i) {
    const double r = y(i) - mu(i);
    total += r * r / (mu(i) + mu(i) * mu(i) / alpha);
  }
  return total;
}

}  // namespace

AlphaEstimate estimate_alpha_mom(const VectorXd& y, const VectorXd& mu, Index p,
                                 const AlphaBracket& bracket) {
  if (y.size() != mu.size()) throw InvalidArgument("response and mean lengths differ");
  const Index n = y.size();
  if (n <= p) {
    throw InsufficientData("moment estimate of alpha needs n > p (n = " + std::to_string(n) +
                           ", p = " + std::to_string(p) + ")");
  }
  if ((mu.array() <= 0.0).any()) throw DomainError("fitted means must be positive");
  if (!(bracket.lower > 0.0) || !(bracket.upper > bracket.lower)) {
    throw InvalidArgument("invalid alpha bracket");
  }
  const double target = static_cast<double>(n - p);

  // The statistic increases with alpha, from 0 towards the Poisson
  // Pearson statistic.
  if (pearson_statistic(y, mu, bracket.upper) <= target) return {bracket.upper, true};
  if (pearson_statistic(y, mu, bracket.lower) >= target) return {bracket.lower, false};

  double lo = std::log(bracket.lower);
  double hi = std::log(bracket.upper);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pearson_statistic(y, mu, std::exp(mid)) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {std::exp(0.5 * (lo + hi)), false};
}

AlphaEstimate estimate_alpha_mom(const Dataset& data, const VectorXd& beta,
                                 const AlphaBracket& bracket) {
  if (beta.size() != data.d()) throw InvalidArgument("coefficient length does not match design");
  const LinearPredictorGuard guard;
  VectorXd mu = (data.X() * beta).unaryExpr([&](double e) { return std::exp(guard.clamp(e)); });
  const Index p = static_cast<Index>((beta.array() != 0.0).count());
  return estimate_alpha_mom(data.y(), mu, p, bracket);
}

}  // namespace countreg
