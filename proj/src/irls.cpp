#include "countreg/irls.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "countreg/errors.hpp"
#include "countreg/likelihood.hpp"

namespace countreg {

std::vector<Index> fitted_columns(const Dataset& data, const std::vector<Index>& support) {
  std::vector<Index> cols;
  cols.reserve(support.size() + 1);
  if (data.has_intercept()) cols.push_back(0);
  for (Index j : support) {
    if (j < 0 || j >= data.d()) {
      throw InvalidArgument("support index " + std::to_string(j) + " out of range");
    }
    cols.push_back(j);
  }
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  return cols;
}

namespace {

// Working weights ∂²(−l)/∂η². For the Poisson these are the Fisher
// weights μ; for the NB with log link the observed weights
// αμ(α+y)/(μ+α)² are used instead, which are positive as well and keep
// the iteration quadratically convergent.
VectorXd working_weights(const GlmFamily& family, const VectorXd& mu, const VectorXd& y) {
  if (family.is_poisson()) return mu;
  const double a = family.alpha();
  return (a * mu.array() * (a + y.array()) / (mu.array() + a).square()).matrix();
}

}  // namespace

VectorXd irls_fit(const GlmFamily& family, const Dataset& data, const std::vector<Index>& support,
                  const IrlsOptions& options) {
  const std::vector<Index> cols = fitted_columns(data, support);
  VectorXd beta = VectorXd::Zero(data.d());
  if (cols.empty()) return beta;

  const Index k = static_cast<Index>(cols.size());
  MatrixXd Xs(data.n(), k);
  for (Index c = 0; c < k; ++c) Xs.col(c) = data.X().col(cols[static_cast<std::size_t>(c)]);

  if (k > data.n()) throw RankDeficient("more fitted columns than observations");
  {
    Eigen::ColPivHouseholderQR<MatrixXd> qr(Xs);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) {
      throw RankDeficient("restricted design has rank " + std::to_string(qr.rank()) + " < " +
                          std::to_string(k));
    }
  }

  const VectorXd& y = data.y();
  const auto& guard = options.guard;
  VectorXd b = VectorXd::Zero(k);
  if (data.has_intercept()) {
    // Start from the intercept-only MLE, ln(ȳ)/c for an intercept column of c.
    const double ybar = std::max(y.mean(), 1e-8);
    b(0) = std::log(ybar) / Xs(0, 0);
  }
  VectorXd eta = Xs * b;
  double obj = neg_loglik_eta(family, eta, y, guard);

  int plateau = 0;
  for (int it = 0; it < options.max_iter; ++it) {
    VectorXd score = Xs.transpose() * neg_loglik_eta_derivative(family, eta, y, guard);
    if (score.norm() < options.gradient_tol) {
      for (Index c = 0; c < k; ++c) beta(cols[static_cast<std::size_t>(c)]) = b(c);
      return beta;
    }
    VectorXd mu = eta.unaryExpr([&](double e) { return std::exp(guard.clamp(e)); });
    VectorXd w = working_weights(family, mu, y);
    MatrixXd info = Xs.transpose() * w.asDiagonal() * Xs;
    Eigen::LDLT<MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 1e-14 * std::max(1.0, ldlt.vectorD().maxCoeff())) {
      throw RankDeficient("singular working matrix in IRLS");
    }
    VectorXd step = ldlt.solve(-score);

    double t = 1.0;
    VectorXd b_new = b + step;
    VectorXd eta_new = Xs * b_new;
    double obj_new = neg_loglik_eta(family, eta_new, y, guard);
    // Near the optimum the change in −l is below rounding, so compare with
    // a little slack and let the gradient test decide convergence.
    const double slack = 1e-13 * std::max(1.0, std::abs(obj));
    for (int h = 0; h < options.max_halvings && !(obj_new <= obj + slack); ++h) {
      t *= 0.5;
      b_new = b + t * step;
      eta_new = Xs * b_new;
      obj_new = neg_loglik_eta(family, eta_new, y, guard);
    }
    if (!std::isfinite(obj_new)) throw NumericError("non-finite objective in IRLS");

    const double change = std::abs(obj - obj_new);
    const bool accepted = obj_new <= obj + slack;
    if (accepted) {
      b = b_new;
      eta = eta_new;
      obj = obj_new;
    }
    // Small changes can precede the last Newton steps that bring the
    // gradient under its tolerance, so require a few in a row.
    const bool small = change <= options.tol * std::max(1.0, std::abs(obj));
    plateau = small ? plateau + 1 : 0;
    if (!accepted || plateau >= 4) {
      for (Index c = 0; c < k; ++c) beta(cols[static_cast<std::size_t>(c)]) = b(c);
      return beta;
    }
  }
  for (Index c = 0; c < k; ++c) beta(cols[static_cast<std::size_t>(c)]) = b(c);
  throw ConvergenceError("IRLS did not converge in " + std::to_string(options.max_iter) +
                             " iterations",
                         beta);
}

}  // namespace countreg
