#pragma once

#include <Eigen/Dense>

namespace oracle {

/// Central finite-difference gradient of `f` at `x` with step `h`.
template <typename F>
Eigen::VectorXd central_difference(F&& f, const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    xp(j) = x(j) + h;
    const double up = f(xp);
    xp(j) = x(j) - h;
    const double down = f(xp);
    xp(j) = x(j);
    g(j) = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace oracle
