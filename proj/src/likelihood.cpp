#include "countreg/likelihood.hpp"

#include <cmath>
#include <string>

#include "countreg/errors.hpp"

namespace countreg {

GlmFamily GlmFamily::negative_binomial(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("negative binomial dispersion must be positive and finite");
  }
  return GlmFamily(FamilyKind::NegBinomial, alpha);
}

double GlmFamily::alpha() const {
  if (!alpha_) throw UnsupportedFamily("the Poisson family has no dispersion parameter");
  return *alpha_;
}

namespace {

void check_dims(const VectorXd& beta, const Dataset& data) {
  if (beta.size() != data.d()) {
    throw InvalidArgument("coefficient length " + std::to_string(beta.size()) +
                          " does not match " + std::to_string(data.d()) + " columns");
  }
}

}  // namespace

double neg_loglik_eta(const GlmFamily& family, const VectorXd& eta, const VectorXd& y,
                      const LinearPredictorGuard& guard) {
  if (eta.size() != y.size()) throw InvalidArgument("linear predictor and response lengths differ");
  double total = 0.0;
  if (family.is_poisson()) {
    for (Index i = 0; i < eta.size(); ++i) {
      const double e = guard.clamp(eta(i));
      total += std::exp(e) - y(i) * e;
    }
    return total;
  }
  const double a = family.alpha();
  const double a_log_a = a * std::log(a);
  for (Index i = 0; i < eta.size(); ++i) {
    const double e = guard.clamp(eta(i));
    total += (y(i) + a) * std::log(std::exp(e) + a) - y(i) * e - a_log_a;
  }
  return total;
}

VectorXd neg_loglik_eta_derivative(const GlmFamily& family, const VectorXd& eta, const VectorXd& y,
                                   const LinearPredictorGuard& guard) {
  if (eta.size() != y.size()) throw InvalidArgument("linear predictor and response lengths differ");
  VectorXd out(eta.size());
  if (family.is_poisson()) {
    for (Index i = 0; i < eta.size(); ++i) out(i) = std::exp(guard.clamp(eta(i))) - y(i);
    return out;
  }
  const double a = family.alpha();
  for (Index i = 0; i < eta.size(); ++i) {
    const double lam = std::exp(guard.clamp(eta(i)));
    out(i) = a * (lam - y(i)) / (lam + a);
  }
  return out;
}

double neg_loglik(const GlmFamily& family, const VectorXd& beta, const Dataset& data,
                  const LinearPredictorGuard& guard) {
  check_dims(beta, data);
  return neg_loglik_eta(family, data.X() * beta, data.y(), guard);
}

VectorXd neg_loglik_gradient(const GlmFamily& family, const VectorXd& beta, const Dataset& data,
                             const LinearPredictorGuard& guard) {
  check_dims(beta, data);
  return data.X().transpose() * neg_loglik_eta_derivative(family, data.X() * beta, data.y(), guard);
}

double largest_eigenvalue_gram(const MatrixXd& X, double tol, int max_iter) {
  if (X.size() == 0) throw InvalidArgument("empty design matrix");
  // Deterministic start with no exact symmetry, so it is unlikely to be
  // orthogonal to the leading eigenvector.
  VectorXd v(X.cols());
  for (Index j = 0; j < v.size(); ++j) v(j) = 1.0 + 0.01 * static_cast<double>(j % 7);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    VectorXd w = X.transpose() * (X * v);
    const double next = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    if (it > 0 && std::abs(next - lambda) <= tol * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

double lipschitz_bound(const GlmFamily& family, const Dataset& data) {
  if (family.is_poisson()) {
    throw UnsupportedFamily("the Poisson gradient has no global Lipschitz constant; use backtracking");
  }
  const double a = family.alpha();
  const double y_bar = data.y().mean();
  return (a + y_bar) / (4.0 * a) * largest_eigenvalue_gram(data.X());
}

}  // namespace countreg
