#pragma once

// Brute-force sorted-ℓ1 prox that shares nothing with the library code.
//
// J(v) = Σ γ_j |v|_(j) is the support function of the convex hull P of all
// signed permutations of γ, so by Moreau decomposition
//   prox_J(u) = u − Π_P(u) = −argmin_{z ∈ conv{a − u : a ∈ vertices(P)}} ‖z‖.
// The min-norm point of a finite point set is found exactly by Wolfe's
// algorithm, with the linear-minimization step done by enumerating every
// vertex (d!·2^d of them).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline std::vector<Eigen::VectorXd> signed_permutations(const Eigen::VectorXd& gamma) {
  const int d = static_cast<int>(gamma.size());
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Eigen::VectorXd> out;
  do {
    for (int signs = 0; signs < (1 << d); ++signs) {
      Eigen::VectorXd a(d);
      for (int j = 0; j < d; ++j) {
        const double s = (signs >> j) & 1 ? -1.0 : 1.0;
        a(perm[static_cast<std::size_t>(j)]) = s * gamma(j);
      }
      out.push_back(std::move(a));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(out.begin(), out.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                        b.data() + b.size());
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Minimum-norm point of conv(points) by Wolfe's algorithm.
inline Eigen::VectorXd min_norm_point(const std::vector<Eigen::VectorXd>& points) {
  const double eps = 1e-13;
  std::size_t first = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].squaredNorm() < points[first].squaredNorm()) first = i;
  }
  std::vector<std::size_t> corral{first};
  std::vector<double> lambda{1.0};
  Eigen::VectorXd x = points[first];
  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, p.squaredNorm());

  for (int major = 0; major < 10000; ++major) {
    std::size_t best = 0;
    double best_val = x.dot(points[0]);
    for (std::size_t i = 1; i < points.size(); ++i) {
      const double v = x.dot(points[i]);
      if (v < best_val) {
        best_val = v;
        best = i;
      }
    }
    if (x.squaredNorm() - best_val <= eps * scale) return x;
    if (std::find(corral.begin(), corral.end(), best) != corral.end()) return x;
    corral.push_back(best);
    lambda.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      const Eigen::Index k = static_cast<Eigen::Index>(corral.size());
      Eigen::MatrixXd S(points[0].size(), k);
      for (Eigen::Index c = 0; c < k; ++c) S.col(c) = points[corral[static_cast<std::size_t>(c)]];
      // Affine minimizer: [SᵗS 1; 1ᵗ 0][μ; ν] = [0; 1].
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k + 1, k + 1);
      A.topLeftCorner(k, k) = S.transpose() * S;
      A.block(0, k, k, 1).setOnes();
      A.block(k, 0, 1, k).setOnes();
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs(k) = 1.0;
      const Eigen::VectorXd sol = A.completeOrthogonalDecomposition().solve(rhs);
      const Eigen::VectorXd mu = sol.head(k);
      if ((mu.array() > eps).all()) {
        x = S * mu;
        for (Eigen::Index c = 0; c < k; ++c) lambda[static_cast<std::size_t>(c)] = mu(c);
        break;
      }
      double theta = 1.0;
      for (Eigen::Index c = 0; c < k; ++c) {
        const double lc = lambda[static_cast<std::size_t>(c)];
        if (mu(c) <= eps && lc - mu(c) > 0.0) theta = std::min(theta, lc / (lc - mu(c)));
      }
      std::vector<std::size_t> kept;
      std::vector<double> kept_lambda;
      for (Eigen::Index c = 0; c < k; ++c) {
        const double lc = (1.0 - theta) * lambda[static_cast<std::size_t>(c)] + theta * mu(c);
        if (lc > eps) {
          kept.push_back(corral[static_cast<std::size_t>(c)]);
          kept_lambda.push_back(lc);
        }
      }
      const double total = std::accumulate(kept_lambda.begin(), kept_lambda.end(), 0.0);
      for (double& l : kept_lambda) l /= total;
      corral = std::move(kept);
      lambda = std::move(kept_lambda);
      x = Eigen::VectorXd::Zero(x.size());
      for (std::size_t c = 0; c < corral.size(); ++c) x += lambda[c] * points[corral[c]];
    }
  }
  return x;
}

/// argmin_v ½‖v − u‖² + Σ_j w_j |v|_(j) for nonincreasing w ≥ 0.
inline Eigen::VectorXd brute_force_prox(const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
  std::vector<Eigen::VectorXd> pts = signed_permutations(w);
  for (auto& p : pts) p -= u;
  return -min_norm_point(pts);
}

/// ½‖v − u‖² + Σ_j w_j |v|_(j), evaluated directly.
inline double prox_objective(const Eigen::VectorXd& v, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& w) {
  Eigen::VectorXd a = v.cwiseAbs();
  std::sort(a.data(), a.data() + a.size(), std::greater<>());
  return 0.5 * (v - u).squaredNorm() + a.dot(w);
}

}  // namespace oracle
