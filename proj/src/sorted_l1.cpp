#include "countreg/sorted_l1.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "countreg/errors.hpp"

namespace countreg {

using Eigen::Index;

GammaSequence::GammaSequence(VectorXd gammas, double scale)
    : gammas_(std::move(gammas)), scale_(scale) {
  if (!gammas_.allFinite() || (gammas_.array() < 0.0).any()) {
    throw InvalidArgument("penalty weights must be finite and nonnegative");
  }
  for (Index j = 1; j < gammas_.size(); ++j) {
    if (gammas_(j) > gammas_(j - 1)) {
      throw InvalidArgument("penalty weights must be nonincreasing (position " +
                            std::to_string(j + 1) + ")");
    }
  }
  if (!(scale_ >= 0.0) || !std::isfinite(scale_)) {
    throw InvalidArgument("penalty scale must be finite and nonnegative");
  }
}

GammaSequence GammaSequence::scaled(double factor) const {
  if (!(factor >= 0.0) || !std::isfinite(factor)) {
    throw InvalidArgument("scaling factor must be finite and nonnegative");
  }
  return GammaSequence(gammas_ * factor, scale_ * factor);
}

namespace {

void check_factory(Index d, double scale) {
  if (d < 1) throw InvalidArgument("penalty length must be at least 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidArgument("penalty scale must be positive and finite");
  }
}

// Indices of |u| in descending order; ties keep index order.
std::vector<Index> descending_abs_order(const VectorXd& u) {
  std::vector<Index> order(static_cast<std::size_t>(u.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(u(a)) > std::abs(u(b)); });
  return order;
}

}  // namespace

GammaSequence slope_gammas(Index d, double scale) {
  check_factory(d, scale);
  VectorXd g(d);
  const double dd = static_cast<double>(d);
  for (Index j = 0; j < d; ++j) {
    g(j) = scale * std::sqrt(std::log(2.0 * dd / static_cast<double>(j + 1)));
  }
  return GammaSequence(std::move(g), scale);
}

GammaSequence lasso_gammas(Index d, double scale) {
  check_factory(d, scale);
  const double dd = d == 1 ? 2.0 : static_cast<double>(d);
  return GammaSequence(VectorXd::Constant(d, scale * std::sqrt(2.0 * std::log(dd))), scale);
}

double sorted_l1_norm(const VectorXd& beta, const GammaSequence& g) {
  if (beta.size() != g.size()) throw InvalidArgument("coefficient and weight lengths differ");
  VectorXd a = beta.cwiseAbs();
  std::sort(a.data(), a.data() + a.size(), std::greater<>());
  return a.dot(g.gammas());
}

VectorXd prox_sorted_l1(const VectorXd& u, const GammaSequence& g, double t) {
  if (u.size() != g.size()) throw InvalidArgument("input and weight lengths differ");
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("prox step must be positive");
  const Index d = u.size();
  const std::vector<Index> order = descending_abs_order(u);

  // Stack of blocks over sorted positions [start, end]; each block stores
  // the sum and mean of |u|_(j) − tγ_j over its positions.
  struct Block {
    Index start;
    Index end;
    double sum;
    double mean;
  };
  std::vector<Block> stack;
  stack.reserve(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) {
    const double v = std::abs(u(order[static_cast<std::size_t>(j)])) - t * g[j];
    stack.push_back({j, j, v, v});
    while (stack.size() > 1 && stack[stack.size() - 2].mean <= stack.back().mean) {
      Block top = stack.back();
      stack.pop_back();
      Block& prev = stack.back();
      prev.end = top.end;
      prev.sum += top.sum;
      prev.mean = prev.sum / static_cast<double>(prev.end - prev.start + 1);
    }
  }

  VectorXd out = VectorXd::Zero(d);
  for (const Block& b : stack) {
    const double level = std::max(b.mean, 0.0);
    if (level == 0.0) continue;
    for (Index j = b.start; j <= b.end; ++j) {
      const Index i = order[static_cast<std::size_t>(j)];
      // sign(0) = 0: an exactly-zero input stays zero.
      out(i) = u(i) < 0.0 ? -level : (u(i) > 0.0 ? level : 0.0);
    }
  }
  return out;
}

}  // namespace countreg
