#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include <boost/random/mersenne_twister.hpp>

namespace countreg {

/// SplitMix64 finalizer; mixes a 64-bit word.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent stream seed from a root seed and a key path
/// (e.g. {design, replicate, purpose}).
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) noexcept;

/// Reproducible random stream. Boost distributions are used because their
/// algorithms are fixed across standard libraries, so a seed produces the
/// same draws everywhere.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t root, std::initializer_list<std::uint64_t> path)
      : engine_(derive_seed(root, path)) {}

  double normal();
  double uniform01();
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  std::int64_t poisson(double mean);
  /// Gamma with the given shape and scale.
  double gamma(double shape, double scale);

  /// Uniformly random permutation of 0..n-1 (Fisher–Yates).
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  boost::random::mt19937_64 engine_;
};

}  // namespace countreg
