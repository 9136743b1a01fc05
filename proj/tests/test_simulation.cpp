#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "countreg/errors.hpp"
#include "countreg/simulation.hpp"

using namespace countreg;

namespace {

double mean(const VectorXd& v) { return v.mean(); }

double variance(const VectorXd& v) {
  const double m = v.mean();
  return (v.array() - m).square().sum() / static_cast<double>(v.size() - 1);
}

SimConfig small_config() {
  SimConfig c;
  c.d = 6;
  c.epsilon = 0.34;
  c.n_train = 60;
  c.n_test = 30;
  c.n_designs = 2;
  c.n_replicates = 2;
  c.seed = 7;
  return c;
}

}  // namespace

TEST_SUITE("simgen") {
  TEST_CASE("AR(1) covariance") {
    CHECK(ar1_covariance(4, 0.0).isApprox(MatrixXd::Identity(4, 4)));
    MatrixXd expected(2, 2);
    expected << 1, 0.5, 0.5, 1;
    CHECK(ar1_covariance(2, 0.5).isApprox(expected));
    for (double rho : {0.0, 0.5, 0.8, 0.99}) {
      const Eigen::LLT<MatrixXd> llt(ar1_covariance(30, rho));
      CHECK(llt.info() == Eigen::Success);
    }
    CHECK_THROWS_AS(ar1_covariance(3, 1.0), InvalidArgument);
  }

  TEST_CASE("design columns have unit norm and are reproducible") {
    SimConfig c;
    c.rho = 0.5;
    RandomStream s1(3, {1});
    RandomStream s2(3, {1});
    const MatrixXd X = sample_design(c, s1);
    CHECK(X.rows() == 300);
    CHECK(X.cols() == 20);
    for (Index j = 0; j < X.cols(); ++j) CHECK(std::abs(X.col(j).norm() - 1.0) < 1e-12);
    CHECK(X == sample_design(c, s2));
    c.normalization = DesignNormalization::Rows;
    RandomStream s3(3, {1});
    const MatrixXd R = sample_design(c, s3);
    for (Index i = 0; i < R.rows(); ++i) CHECK(std::abs(R.row(i).norm() - 1.0) < 1e-12);
  }

  TEST_CASE("independent design columns are uncorrelated") {
    SimConfig c;
    c.d = 3;
    c.n_train = 20000;
    c.n_test = 0 + 1;
    RandomStream s(11);
    const MatrixXd X = sample_design(c, s);
    const double n = static_cast<double>(X.rows());
    for (Index j = 0; j + 1 < X.cols(); ++j) {
      const VectorXd a = X.col(j).array() - X.col(j).mean();
      const VectorXd b = X.col(j + 1).array() - X.col(j + 1).mean();
      CHECK(std::abs(a.dot(b) / (a.norm() * b.norm())) < 3.0 / std::sqrt(n));
    }
  }

  TEST_CASE("AR(1) design has the target adjacent correlation") {
    SimConfig c;
    c.d = 4;
    c.rho = 0.8;
    c.n_train = 20000;
    RandomStream s(12);
    const MatrixXd X = sample_design(c, s);
    const VectorXd a = X.col(1).array() - X.col(1).mean();
    const VectorXd b = X.col(2).array() - X.col(2).mean();
    CHECK(a.dot(b) / (a.norm() * b.norm()) == doctest::Approx(0.8).epsilon(0.02));
  }

  TEST_CASE("coefficient draws") {
    RandomStream s(5);
    int positive = 0;
    int total = 0;
    for (int rep = 0; rep < 10000; ++rep) {
      const VectorXd b = sample_beta(20, 4, s);
      int nz = 0;
      for (Index j = 0; j < b.size(); ++j) {
        if (b(j) == 0.0) continue;
        ++nz;
        CHECK((std::abs(b(j)) == 0.5 || std::abs(b(j)) == 0.6));
        positive += b(j) > 0 ? 1 : 0;
        ++total;
      }
      REQUIRE(nz == 4);
    }
    const double sd = std::sqrt(total * 0.25);
    CHECK(std::abs(positive - total / 2.0) < 3.0 * sd);
    CHECK_THROWS_AS(sample_beta(3, 4, s), InvalidArgument);
  }

  TEST_CASE("response moments") {
    const Index n = 100000;
    const MatrixXd X = MatrixXd::Zero(n, 2);
    const VectorXd b = VectorXd::Zero(2);
    RandomStream s(21);
    const VectorXd yp = sample_response(GlmFamily::poisson(), X, b, s);
    CHECK(std::abs(mean(yp) - 1.0) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(variance(yp) == doctest::Approx(1.0).epsilon(0.03));
    const VectorXd ynb = sample_response(GlmFamily::negative_binomial(2.0), X, b, s);
    CHECK(std::abs(mean(ynb) - 1.0) < 5.0 * std::sqrt(1.5 / static_cast<double>(n)));
    CHECK(variance(ynb) == doctest::Approx(1.5).epsilon(0.05));
    RandomStream a(9);
    RandomStream c(9);
    CHECK(sample_response(GlmFamily::poisson(), X.topRows(50), b, a) ==
          sample_response(GlmFamily::poisson(), X.topRows(50), b, c));
  }

  TEST_CASE("configuration validation") {
    SimConfig c;
    CHECK(c.d0() == 2);
    c.epsilon = 0.3;
    CHECK(c.d0() == 6);
    c.epsilon = 0.01;
    CHECK(c.d0() == 0);
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c.force_zero_beta = true;
    CHECK_NOTHROW(c.validate());
    c = SimConfig{};
    c.rho = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = SimConfig{};
    c.methods.clear();
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    const auto full = SimConfig::full_scale(SimConfig{});
    CHECK(full.n_designs == 100);
    CHECK(full.n_replicates == 300);
  }

  TEST_CASE("benchmark report shape and determinism") {
    const SimConfig c = small_config();
    const auto r1 = run_benchmark(c);
    const auto r2 = run_benchmark(c);
    REQUIRE(r1.records.size() == 2u * 2u * 3u);
    std::ostringstream a;
    std::ostringstream b;
    write_benchmark_csv(r1, a);
    write_benchmark_csv(r2, b);
    CHECK(a.str() == b.str());
    for (const auto& rec : r1.records) {
      REQUIRE(rec.test_kl.has_value());
      CHECK(*rec.test_kl >= 0.0);
      CHECK(*rec.model_size <= c.d);
    }
    SimConfig other = c;
    other.seed = 8;
    std::ostringstream o;
    write_benchmark_csv(run_benchmark(other), o);
    CHECK(o.str() != a.str());
  }

  TEST_CASE("method subset") {
    SimConfig c = small_config();
    c.methods = {Method::Forward};
    const auto r = run_benchmark(c);
    CHECK(r.records.size() == 4);
    for (const auto& rec : r.records) CHECK(rec.method == Method::Forward);
  }

  TEST_CASE("null signal gives small models") {
    SimConfig c;
    c.force_zero_beta = true;
    c.n_designs = 3;
    c.n_replicates = 3;
    c.seed = 99;
    const auto summary = summarize(run_benchmark(c));
    for (const auto& s : summary) CHECK(s.model_size.median <= 2.0);
  }

  TEST_CASE("quartiles") {
    const auto q = quartiles({4, 1, 3, 2});
    CHECK(q.q1 == doctest::Approx(1.75));
    CHECK(q.median == doctest::Approx(2.5));
    CHECK(q.q3 == doctest::Approx(3.25));
    CHECK(quartiles({5}).median == 5.0);
    CHECK_THROWS_AS(quartiles({}), InvalidArgument);
  }

  TEST_CASE("failed cells are written with empty fields") {
    BenchmarkReport rep;
    rep.config.methods = {Method::Lasso};
    BenchmarkRecord ok;
    ok.method = Method::Lasso;
    ok.test_kl = 1.5;
    ok.model_size = 2;
    ok.chosen_constant = 0.1;
    BenchmarkRecord bad;
    bad.method = Method::Lasso;
    bad.replicate = 1;
    bad.status = "failed";
    rep.records = {ok, bad};
    std::ostringstream out;
    write_benchmark_csv(rep, out);
    CHECK(out.str() ==
          "design,replicate,method,test_kl,model_size,chosen_constant,status\n"
          "0,0,lasso,1.5,2,0.10000000000000001,ok\n"
          "0,1,lasso,,,,failed\n");
    const auto s = summarize(rep);
    CHECK(s[0].cells == 2);
    CHECK(s[0].failed == 1);
    CHECK(s[0].test_kl.median == 1.5);
  }
}
