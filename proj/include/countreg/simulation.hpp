#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "countreg/cross_validation.hpp"
#include "countreg/dataset.hpp"
#include "countreg/family.hpp"
#include "countreg/random.hpp"

namespace countreg {

/// Which vectors of the sampled design are scaled to unit Euclidean norm.
enum class DesignNormalization { Columns, Rows };

struct SimConfig {
  Index d = 20;
  double rho = 0.0;
  double epsilon = 0.1;
  Index n_train = 200;
  Index n_test = 100;
  int n_designs = 10;
  int n_replicates = 10;
  GlmFamily family = GlmFamily::poisson();
  std::uint64_t seed = 0;
  std::vector<Method> methods{Method::Slope, Method::Lasso, Method::Forward};
  /// Null-signal runs: every coefficient is zero regardless of epsilon.
  bool force_zero_beta = false;
  int cv_folds = 5;
  DesignNormalization normalization = DesignNormalization::Columns;

  /// 100 designs × 300 replicates.
  static SimConfig full_scale(SimConfig base);

  /// round(epsilon · min(d, n_train)).
  Index d0() const;
  /// Throws InvalidArgument on an inconsistent configuration.
  void validate() const;
};

/// Σ_ij = ρ^|i−j|.
MatrixXd ar1_covariance(Index d, double rho);

/// (n_train + n_test) rows drawn from N(0, Σ), then columns (default) or
/// rows scaled to unit norm.
MatrixXd sample_design(const SimConfig& config, RandomStream& stream);

/// d0 random positions set to ±0.5 or ±0.6, the rest zero.
VectorXd sample_beta(Index d, Index d0, RandomStream& stream);

/// Counts with mean exp(Xβ); NB draws are Gamma(α, rate α) mixtures of Poissons.
VectorXd sample_response(const GlmFamily& family, const MatrixXd& X, const VectorXd& beta,
                         RandomStream& stream);

struct BenchmarkRecord {
  int design = 0;
  int replicate = 0;
  Method method = Method::Slope;
  /// Empty when the cell failed.
  std::optional<double> test_kl;
  std::optional<Index> model_size;
  std::optional<double> chosen_constant;
  std::string status = "ok";
  std::int64_t runtime_ms = 0;
};

struct BenchmarkReport {
  SimConfig config;
  std::vector<BenchmarkRecord> records;
};

/// Runs the whole protocol. Every design, replicate and CV partition has
/// its own stream derived from config.seed, so the report depends on the
/// configuration alone.
BenchmarkReport run_benchmark(const SimConfig& config);

/// One row per cell: design,replicate,method,test_kl,model_size,
/// chosen_constant,status. Failed cells leave the numeric fields empty.
/// Wall-clock times are excluded so the file is reproducible.
void write_benchmark_csv(const BenchmarkReport& report, std::ostream& out);

/// design,replicate,method,runtime_ms.
void write_timings_csv(const BenchmarkReport& report, std::ostream& out);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Linear-interpolation quantiles (R type 7). Throws on empty input.
Quartiles quartiles(std::vector<double> values);

struct MethodSummary {
  Method method = Method::Slope;
  std::size_t cells = 0;
  std::size_t failed = 0;
  Quartiles test_kl;
  Quartiles model_size;
};

std::vector<MethodSummary> summarize(const BenchmarkReport& report);

}  // namespace countreg
