#pragma once

// Random problem instances for property tests. Uses the standard library
// generators; the library's own simulation code is deliberately not used.

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "countreg/dataset.hpp"
#include "countreg/family.hpp"

namespace oracle {

struct Instance {
  countreg::Dataset data;
  Eigen::VectorXd beta;  // coefficients with |Xβ| ≤ eta_bound
};

inline Eigen::MatrixXd gaussian_matrix(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = z(rng);
  return X;
}

/// Standardized design (optionally with intercept), coefficients rescaled
/// so that max|η| = eta_bound·U(0.2, 1), and counts drawn from the family.
inline Instance random_instance(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d,
                                const countreg::GlmFamily& family, double eta_bound,
                                bool intercept = false) {
  Eigen::MatrixXd X = gaussian_matrix(rng, n, d);
  if (intercept) X.col(0).setOnes();
  // Provisional dataset only to get the standardized columns.
  Eigen::VectorXd zeros = Eigen::VectorXd::Zero(n);
  auto scaled = countreg::Dataset::create(X, zeros, intercept, true);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> unif(0.2, 1.0);
  Eigen::VectorXd beta(d);
  for (Eigen::Index j = 0; j < d; ++j) beta(j) = z(rng);
  const Eigen::VectorXd eta = scaled.X() * beta;
  beta *= eta_bound * unif(rng) / std::max(eta.cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::VectorXd eta2 = scaled.X() * beta;

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double lam = std::exp(eta2(i));
    if (!family.is_poisson()) {
      std::gamma_distribution<double> gam(family.alpha(), 1.0 / family.alpha());
      lam *= gam(rng);
    }
    std::poisson_distribution<long> pois(lam);
    y(i) = static_cast<double>(pois(rng));
  }
  return {countreg::Dataset::with_norms(scaled.X(), y, scaled.column_norms(), intercept), beta};
}

/// Random point with |η| ≤ bound (direction random, rescaled).
inline Eigen::VectorXd random_beta_within(std::mt19937_64& rng, const countreg::Dataset& data,
                                          double bound) {
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd b(data.d());
  for (Eigen::Index j = 0; j < b.size(); ++j) b(j) = z(rng);
  const double m = (data.X() * b).cwiseAbs().maxCoeff();
  return b * (bound * unif(rng) / std::max(m, 1e-12));
}

}  // namespace oracle
