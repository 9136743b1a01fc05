#include <doctest.h>

#include <cmath>
#include <random>

#include "countreg/dataset.hpp"
#include "countreg/dispersion.hpp"
#include "countreg/divergence.hpp"
#include "countreg/errors.hpp"
#include "countreg/irls.hpp"
#include "countreg/likelihood.hpp"
#include "oracles/finite_difference.hpp"
#include "oracles/random_data.hpp"

using namespace countreg;

namespace {

Dataset raw(MatrixXd X, VectorXd y, bool intercept = false) {
  return Dataset::create(std::move(X), std::move(y), intercept, false);
}

double rel_err(const VectorXd& a, const VectorXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace

TEST_SUITE("glm_core") {

TEST_CASE("dataset validation") {
  MatrixXd X(2, 1);
  X << 1.0, 2.0;
  CHECK_THROWS_AS(raw(X, VectorXd::Constant(2, -1.0)), InvalidArgument);
  CHECK_THROWS_AS(raw(X, VectorXd::Constant(2, 0.5)), InvalidArgument);
  CHECK_THROWS_AS(raw(X, VectorXd::Zero(3)), InvalidArgument);
  MatrixXd Z = MatrixXd::Zero(2, 1);
  CHECK_THROWS_AS(raw(Z, VectorXd::Zero(2)), InvalidArgument);

  MatrixXd W(3, 3);
  W << 1, 3, 0, 1, 4, 1, 1, 0, 2;
  auto ds = Dataset::create(W, VectorXd::Zero(3), true, true);
  CHECK(ds.column_norms()(0) == 1.0);
  CHECK(ds.X().col(0).isOnes());
  for (Index j = 1; j < 3; ++j) CHECK(std::abs(ds.X().col(j).norm() - 1.0) < 1e-12);
  CHECK(ds.column_norms()(1) == doctest::Approx(5.0));
  CHECK(ds.penalized_count() == 2);
}

TEST_CASE("neg_loglik hand values") {
  auto ds = raw(MatrixXd::Identity(2, 2), VectorXd::Zero(2));
  CHECK(neg_loglik(GlmFamily::poisson(), VectorXd::Zero(2), ds) == doctest::Approx(2.0));

  VectorXd y(3);
  y << 1, 2, 3;
  auto ones = raw(MatrixXd::Ones(3, 1), y, true);
  VectorXd b(1);
  b << std::log(2.0);
  CHECK(neg_loglik(GlmFamily::poisson(), b, ones) == doctest::Approx(1.841117).epsilon(1e-6));

  CHECK_THROWS_AS(neg_loglik(GlmFamily::poisson(), VectorXd::Zero(3), ds), InvalidArgument);
}

TEST_CASE("NB approaches Poisson up to a beta-free constant") {
  std::mt19937_64 rng(11);
  auto inst = oracle::random_instance(rng, 30, 4, GlmFamily::poisson(), 2.0);
  const auto nb = GlmFamily::negative_binomial(1e8);
  const auto po = GlmFamily::poisson();
  VectorXd b1 = oracle::random_beta_within(rng, inst.data, 2.0);
  VectorXd b2 = oracle::random_beta_within(rng, inst.data, 2.0);
  const double gap1 = neg_loglik(nb, b1, inst.data) - neg_loglik(po, b1, inst.data);
  const double gap2 = neg_loglik(nb, b2, inst.data) - neg_loglik(po, b2, inst.data);
  CHECK(std::abs(gap1 - gap2) < 1e-4);
  CHECK((neg_loglik_gradient(nb, b1, inst.data) - neg_loglik_gradient(po, b1, inst.data))
            .cwiseAbs()
            .maxCoeff() < 1e-4);
}

TEST_CASE("gradient zero at fitted means") {
  auto ds = raw(MatrixXd::Identity(2, 2), VectorXd::Ones(2));
  CHECK(neg_loglik_gradient(GlmFamily::poisson(), VectorXd::Zero(2), ds).norm() == 0.0);
  CHECK(neg_loglik_gradient(GlmFamily::negative_binomial(1.0), VectorXd::Zero(2), ds).norm() == 0.0);
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(5);
  for (const auto& fam : {GlmFamily::poisson(), GlmFamily::negative_binomial(1.7)}) {
    auto inst = oracle::random_instance(rng, 5, 3, fam, 2.0);
    const VectorXd b = oracle::random_beta_within(rng, inst.data, 3.0);
    const VectorXd fd = oracle::central_difference(
        [&](const VectorXd& x) { return neg_loglik(fam, x, inst.data); }, b, 1e-5);
    CHECK(rel_err(neg_loglik_gradient(fam, b, inst.data), fd) < 1e-5);
  }
}

TEST_CASE("lipschitz bound") {
  VectorXd y(2);
  y << 1, 3;
  auto ds = raw(MatrixXd::Identity(2, 2), y);
  CHECK(lipschitz_bound(GlmFamily::negative_binomial(1.0), ds) == doctest::Approx(0.75));

  MatrixXd X = MatrixXd::Zero(2, 2);
  X(0, 0) = 2.0;
  X(1, 1) = 1.0;
  auto ds2 = raw(X, VectorXd::Constant(2, 2.0));
  CHECK(lipschitz_bound(GlmFamily::negative_binomial(2.0), ds2) == doctest::Approx(2.0));

  CHECK_THROWS_AS(lipschitz_bound(GlmFamily::poisson(), ds), UnsupportedFamily);
}

TEST_CASE("power iteration agrees with a dense eigen solver") {
  std::mt19937_64 rng(3);
  const MatrixXd X = oracle::gaussian_matrix(rng, 40, 7);
  const MatrixXd G = X.transpose() * X;
  const double exact = Eigen::SelfAdjointEigenSolver<MatrixXd>(G).eigenvalues().maxCoeff();
  CHECK(std::abs(largest_eigenvalue_gram(X) - exact) / exact < 1e-6);
}

TEST_CASE("KL hand values") {
  CHECK(kl_poisson(2.0, 2.0) == 0.0);
  CHECK(kl_poisson(1.0, std::exp(1.0)) == doctest::Approx(0.718282).epsilon(1e-6));
  CHECK(kl_poisson(4.0, 2.0) == doctest::Approx(0.772589).epsilon(1e-6));
  CHECK(kl_poisson(0.0, 3.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(kl_poisson(1.0, 0.0), DomainError);

  CHECK(std::abs(kl_nb(3.0, 3.0, 1.5)) < 1e-15);
  // 2 ln(4/3) − ln(3/2)
  CHECK(kl_nb(2.0, 1.0, 1.0) == doctest::Approx(0.169899).epsilon(1e-6));
  CHECK(std::abs(kl_nb(1.0, std::exp(1.0), 1e6) - kl_poisson(1.0, std::exp(1.0))) < 1e-4);
  CHECK_THROWS_AS(kl_nb(1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("KL is nonnegative and vanishes only on the diagonal") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> lam(0.0, 20.0);
  std::uniform_real_distribution<double> la(-3.0, 3.0);
  for (int rep = 0; rep < 2000; ++rep) {
    const double l1 = rep % 10 == 0 ? 0.0 : lam(rng);
    const double l2 = lam(rng) + 1e-3;
    const double a = std::pow(10.0, la(rng));
    const double kp = kl_poisson(l1, l2);
    const double kn = kl_nb(l1, l2, a);
    CHECK(kp >= -1e-12);
    CHECK(kn >= -1e-12);
    if (std::abs(l1 - l2) > 1e-2) {
      CHECK(kp > 0.0);
      CHECK(kn > 0.0);
    }
  }
}

TEST_CASE("test_kl and normalized deviance") {
  VectorXd y(2), eta(2);
  y << 1, 2;
  eta << 0.0, std::log(2.0);
  CHECK(std::abs(test_kl(GlmFamily::poisson(), y, eta)) < 1e-15);

  y << 0, 2;
  eta << 0, 0;
  CHECK(test_kl(GlmFamily::poisson(), y, eta) == doctest::Approx(1.386294).epsilon(1e-6));
  CHECK(normalized_deviance(GlmFamily::poisson(), y, eta) ==
        doctest::Approx(1.386294).epsilon(1e-6));

  VectorXd y1(1), e1(1);
  y1 << 2;
  e1 << 0;
  CHECK(test_kl(GlmFamily::negative_binomial(1.0), y1, e1) ==
        doctest::Approx(0.169899).epsilon(1e-6));
  CHECK_THROWS_AS(test_kl(GlmFamily::poisson(), y1, eta), InvalidArgument);
}

TEST_CASE("irls intercept-only and empty support") {
  VectorXd y(3);
  y << 1, 2, 3;
  auto ones = raw(MatrixXd::Ones(3, 1), y, true);
  const VectorXd b = irls_fit(GlmFamily::poisson(), ones, {});
  CHECK(b(0) == doctest::Approx(std::log(2.0)).epsilon(1e-10));

  auto ds = raw(MatrixXd::Identity(3, 2) + MatrixXd::Ones(3, 2), y);
  const VectorXd z = irls_fit(GlmFamily::poisson(), ds, {});
  CHECK(z.isZero(0.0));
}

TEST_CASE("irls stationarity on random instances") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    const auto fam = rep % 2 ? GlmFamily::poisson() : GlmFamily::negative_binomial(2.0);
    auto inst = oracle::random_instance(rng, 60, 5, fam, 2.0, true);
    const std::vector<Index> support{1, 3, 4};
    const VectorXd b = irls_fit(fam, inst.data, support);
    CHECK(b(2) == 0.0);
    const VectorXd g = neg_loglik_gradient(fam, b, inst.data);
    double on_support = g(0) * g(0);
    for (Index j : support) on_support += g(j) * g(j);
    CHECK(std::sqrt(on_support) < 1e-8);
    if (fam.is_poisson()) {
      const VectorXd mu = (inst.data.X() * b).array().exp().matrix();
      CHECK(std::abs((inst.data.y() - mu).sum()) < 1e-6);
    }
  }
}

TEST_CASE("irls rejects collinear columns") {
  MatrixXd X(4, 2);
  X << 1, 2, 2, 4, 3, 6, 4, 8;
  auto ds = raw(X, VectorXd::Ones(4));
  CHECK_THROWS_AS(irls_fit(GlmFamily::poisson(), ds, {0, 1}), RankDeficient);
}

TEST_CASE("irls reports non-convergence with the last iterate") {
  std::mt19937_64 rng(2);
  auto inst = oracle::random_instance(rng, 50, 3, GlmFamily::poisson(), 2.0, true);
  IrlsOptions opts;
  opts.max_iter = 1;
  try {
    irls_fit(GlmFamily::poisson(), inst.data, {1, 2}, opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.last_iterate().size() == 3);
    CHECK(e.last_iterate().allFinite());
  }
}

TEST_CASE("method-of-moments alpha") {
  SUBCASE("closed form for intercept-only fits") {
    // With μ_i = ȳ the equation reads S/(ȳ(1 + ȳ/α)) = n − 1, so
    // α = ȳ / (S/(ȳ(n−1)) − 1).
    VectorXd y(6);
    y << 0, 4, 2, 10, 1, 7;
    const double ybar = y.mean();
    const double S = (y.array() - ybar).square().sum();
    const double expected = ybar / (S / (ybar * 5.0) - 1.0);
    const auto est = estimate_alpha_mom(y, VectorXd::Constant(6, ybar), 1);
    CHECK_FALSE(est.effectively_poisson);
    CHECK(std::abs(est.alpha - expected) < 1e-6 * expected);
  }
  SUBCASE("NB(2) sample") {
    std::mt19937_64 rng(99);
    const int n = 5000;
    VectorXd y(n);
    std::gamma_distribution<double> gam(2.0, 0.5);
    for (int i = 0; i < n; ++i) {
      std::poisson_distribution<long> p(3.0 * gam(rng));
      y(i) = static_cast<double>(p(rng));
    }
    auto ds = raw(MatrixXd::Ones(n, 1), y, true);
    const VectorXd b = irls_fit(GlmFamily::poisson(), ds, {});
    const auto est = estimate_alpha_mom(ds, b);
    CHECK_FALSE(est.effectively_poisson);
    CHECK(est.alpha >= 1.6);
    CHECK(est.alpha <= 2.5);
  }
  SUBCASE("Poisson sample is effectively Poisson") {
    // Under the Poisson the Pearson statistic is n − p in expectation, so
    // either no root exists or the root is very large.
    std::mt19937_64 rng(7);
    const int n = 20000;
    VectorXd y(n);
    std::poisson_distribution<long> p(2.5);
    for (int i = 0; i < n; ++i) y(i) = static_cast<double>(p(rng));
    auto ds = raw(MatrixXd::Ones(n, 1), y, true);
    const auto est = estimate_alpha_mom(ds, irls_fit(GlmFamily::poisson(), ds, {}));
    CHECK((est.effectively_poisson || est.alpha > 20.0));
    if (est.effectively_poisson) CHECK(est.alpha == 1e8);
  }
  SUBCASE("needs n > p") {
    CHECK_THROWS_AS(estimate_alpha_mom(VectorXd::Ones(2), VectorXd::Ones(2), 2), InsufficientData);
  }
}

}  // TEST_SUITE
