#include "countreg/divergence.hpp"

#include <cmath>

#include "countreg/errors.hpp"

namespace countreg {

namespace {

// x ln(x / y) with 0 ln 0 = 0.
double xlogx_over(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); }

void check_args(double lambda1, double lambda2) {
  if (!(lambda1 >= 0.0) || !std::isfinite(lambda1)) {
    throw DomainError("first KL argument must be finite and nonnegative");
  }
  if (!(lambda2 > 0.0) || !std::isfinite(lambda2)) {
    throw DomainError("second KL argument must be finite and positive");
  }
}

}  // namespace

double kl_poisson(double lambda1, double lambda2) {
  check_args(lambda1, lambda2);
  return xlogx_over(lambda1, lambda2) - lambda1 + lambda2;
}

double kl_nb(double lambda1, double lambda2, double alpha) {
  check_args(lambda1, lambda2);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be positive");
  // Written as y ln(y/μ) − (y+α) ln((y+α)/(μ+α)); log1p keeps the large-α
  // limit accurate where the two terms nearly cancel.
  const double ratio = std::log1p((lambda1 - lambda2) / (lambda2 + alpha));
  return xlogx_over(lambda1, lambda2) - (lambda1 + alpha) * ratio;
}

double kl_family(const GlmFamily& family, double lambda1, double lambda2) {
  return family.is_poisson() ? kl_poisson(lambda1, lambda2)
                             : kl_nb(lambda1, lambda2, family.alpha());
}

double test_kl(const GlmFamily& family, const VectorXd& y, const VectorXd& eta_hat,
               const LinearPredictorGuard& guard) {
  if (y.size() != eta_hat.size()) throw InvalidArgument("response and predictor lengths differ");
  double total = 0.0;
  for (Index i = 0; i < y.size(); ++i) {
    total += kl_family(family, y(i), std::exp(guard.clamp(eta_hat(i))));
  }
  return total;
}

double normalized_deviance(const GlmFamily& family, const VectorXd& y, const VectorXd& eta_hat,
                           const LinearPredictorGuard& guard) {
  if (y.size() == 0) throw InvalidArgument("normalized deviance of an empty sample");
  return 2.0 / static_cast<double>(y.size()) * test_kl(family, y, eta_hat, guard);
}

}  // namespace countreg
