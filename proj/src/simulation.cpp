#include "countreg/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "countreg/divergence.hpp"
#include "countreg/errors.hpp"

namespace countreg {

namespace {

// Stream purposes; part of every derived seed.
constexpr std::uint64_t kDesign = 1;
constexpr std::uint64_t kResponse = 2;
constexpr std::uint64_t kSplit = 3;
constexpr std::uint64_t kFolds = 4;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SimConfig SimConfig::full_scale(SimConfig base) {
  base.n_designs = 100;
  base.n_replicates = 300;
  return base;
}

Index SimConfig::d0() const {
  return static_cast<Index>(std::llround(epsilon * static_cast<double>(std::min(d, n_train))));
}

void SimConfig::validate() const {
  if (d < 1) throw InvalidArgument("d must be at least 1");
  if (!(rho >= 0.0 && rho < 1.0)) throw InvalidArgument("rho must lie in [0, 1)");
  if (n_train < 2 || n_test < 0) throw InvalidArgument("n_train must be ≥ 2 and n_test ≥ 0");
  if (n_designs < 1 || n_replicates < 1) throw InvalidArgument("design and replicate counts must be positive");
  if (cv_folds < 2 || cv_folds > n_train) throw InvalidArgument("cv_folds must lie in [2, n_train]");
  if (methods.empty()) throw InvalidArgument("no methods requested");
  if (!force_zero_beta) {
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InvalidArgument("epsilon must lie in (0, 1]");
    const Index k = d0();
    if (k < 1) throw InvalidArgument("epsilon gives d0 = 0 active features");
    if (k > d || k > n_train) throw InvalidArgument("d0 exceeds d or n_train");
  }
}

MatrixXd ar1_covariance(Index d, double rho) {
  if (d < 1 || !(rho >= 0.0 && rho < 1.0)) throw InvalidArgument("need d ≥ 1 and rho in [0, 1)");
  MatrixXd S(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) S(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
  return S;
}

MatrixXd sample_design(const SimConfig& config, RandomStream& stream) {
  const Index n = config.n_train + config.n_test;
  const Eigen::LLT<MatrixXd> llt(ar1_covariance(config.d, config.rho));
  const MatrixXd L = llt.matrixL();
  MatrixXd Z(n, config.d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < config.d; ++j) Z(i, j) = stream.normal();
  MatrixXd X = Z * L.transpose();
  if (config.normalization == DesignNormalization::Rows) {
    for (Index i = 0; i < X.rows(); ++i) X.row(i) /= X.row(i).norm();
  } else {
    for (Index j = 0; j < X.cols(); ++j) X.col(j) /= X.col(j).norm();
  }
  return X;
}

VectorXd sample_beta(Index d, Index d0, RandomStream& stream) {
  if (d0 < 0 || d0 > d) throw InvalidArgument("need 0 ≤ d0 ≤ d");
  static constexpr double kValues[4] = {0.5, -0.5, 0.6, -0.6};
  const auto perm = stream.permutation(static_cast<std::size_t>(d));
  VectorXd beta = VectorXd::Zero(d);
  for (Index k = 0; k < d0; ++k) {
    beta(static_cast<Index>(perm[static_cast<std::size_t>(k)])) = kValues[stream.uniform_int(0, 3)];
  }
  return beta;
}

VectorXd sample_response(const GlmFamily& family, const MatrixXd& X, const VectorXd& beta,
                         RandomStream& stream) {
  if (X.cols() != beta.size()) throw InvalidArgument("design and coefficient dimensions differ");
  const VectorXd eta = X * beta;
  VectorXd y(X.rows());
  for (Index i = 0; i < X.rows(); ++i) {
    double lambda = std::exp(eta(i));
    if (!family.is_poisson()) lambda *= stream.gamma(family.alpha(), 1.0 / family.alpha());
    y(i) = static_cast<double>(stream.poisson(lambda));
  }
  return y;
}

BenchmarkReport run_benchmark(const SimConfig& config) {
  config.validate();
  if (config.n_test < 1) throw InvalidArgument("the benchmark needs n_test ≥ 1");
  BenchmarkReport report;
  report.config = config;
  const Index n = config.n_train + config.n_test;
  const Index d0 = config.force_zero_beta ? 0 : config.d0();

  for (int design = 0; design < config.n_designs; ++design) {
    const auto dkey = static_cast<std::uint64_t>(design);
    RandomStream design_stream(config.seed, {kDesign, dkey});
    const MatrixXd X = sample_design(config, design_stream);
    const VectorXd beta = sample_beta(config.d, d0, design_stream);

    // Fitted models carry an intercept; the generating model has none.
    MatrixXd X1(n, config.d + 1);
    X1.col(0).setOnes();
    X1.rightCols(config.d) = X;

    for (int rep = 0; rep < config.n_replicates; ++rep) {
      const auto rkey = static_cast<std::uint64_t>(rep);
      RandomStream response_stream(config.seed, {kResponse, dkey, rkey});
      const VectorXd y = sample_response(config.family, X, beta, response_stream);

      RandomStream split_stream(config.seed, {kSplit, dkey, rkey});
      const auto perm = split_stream.permutation(static_cast<std::size_t>(n));
      std::vector<Index> train_rows(perm.begin(), perm.begin() + config.n_train);
      std::vector<Index> test_rows(perm.begin() + config.n_train, perm.end());
      std::sort(train_rows.begin(), train_rows.end());
      std::sort(test_rows.begin(), test_rows.end());

      MatrixXd Xtr(config.n_train, config.d + 1);
      VectorXd ytr(config.n_train);
      for (Index r = 0; r < config.n_train; ++r) {
        Xtr.row(r) = X1.row(train_rows[static_cast<std::size_t>(r)]);
        ytr(r) = y(train_rows[static_cast<std::size_t>(r)]);
      }
      MatrixXd Xte(config.n_test, config.d + 1);
      VectorXd yte(config.n_test);
      for (Index r = 0; r < config.n_test; ++r) {
        Xte.row(r) = X1.row(test_rows[static_cast<std::size_t>(r)]);
        yte(r) = y(test_rows[static_cast<std::size_t>(r)]);
      }

      CvOptions cv;
      cv.k_folds = config.cv_folds;
      cv.seed = derive_seed(config.seed, {kFolds, dkey, rkey});

      for (Method method : config.methods) {
        BenchmarkRecord rec;
        rec.design = design;
        rec.replicate = rep;
        rec.method = method;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const Dataset train = Dataset::create(Xtr, ytr, true, true);
          const MatrixXd Xte_scaled = apply_column_scaling(Xte, train.column_norms(), true);
          const CvResult tuned = cross_validate(config.family, train, method, default_grid(method), cv);
          const MethodFit fit = fit_method(config.family, train, method, tuned.chosen, cv.method);
          rec.test_kl = test_kl(config.family, yte, Xte_scaled * fit.beta);
          rec.model_size = fit.model_size;
          rec.chosen_constant = tuned.chosen;
          if (!fit.converged) rec.status = "not_converged";
        } catch (const Error& e) {
          rec.test_kl.reset();
          rec.model_size.reset();
          rec.chosen_constant.reset();
          rec.status = "failed";
        }
        rec.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        report.records.push_back(std::move(rec));
      }
    }
  }
  return report;
}

void write_benchmark_csv(const BenchmarkReport& report, std::ostream& out) {
  out << "design,replicate,method,test_kl,model_size,chosen_constant,status\n";
  for (const auto& r : report.records) {
    out << r.design << ',' << r.replicate << ',' << method_name(r.method) << ','
        << (r.test_kl ? format_double(*r.test_kl) : "") << ','
        << (r.model_size ? std::to_string(*r.model_size) : "") << ','
        << (r.chosen_constant ? format_double(*r.chosen_constant) : "") << ',' << r.status << '\n';
  }
}

void write_timings_csv(const BenchmarkReport& report, std::ostream& out) {
  out << "design,replicate,method,runtime_ms\n";
  for (const auto& r : report.records) {
    out << r.design << ',' << r.replicate << ',' << method_name(r.method) << ',' << r.runtime_ms << '\n';
  }
}

Quartiles quartiles(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("quantiles of an empty sample");
  std::sort(values.begin(), values.end());
  auto q = [&](double p) {
    const double h = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return {q(0.25), q(0.5), q(0.75)};
}

std::vector<MethodSummary> summarize(const BenchmarkReport& report) {
  std::vector<MethodSummary> out;
  for (Method m : report.config.methods) {
    MethodSummary s;
    s.method = m;
    std::vector<double> kl;
    std::vector<double> size;
    for (const auto& r : report.records) {
      if (r.method != m) continue;
      ++s.cells;
      if (!r.test_kl) {
        ++s.failed;
        continue;
      }
      kl.push_back(*r.test_kl);
      size.push_back(static_cast<double>(*r.model_size));
    }
    if (!kl.empty()) {
      s.test_kl = quartiles(kl);
      s.model_size = quartiles(size);
    } else {
      const double nan = std::nan("");
      s.test_kl = s.model_size = {nan, nan, nan};
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace countreg
