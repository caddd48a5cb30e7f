#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace iamlearn {

/// SplitMix64 finalizer. Used to turn counters into well-spread seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives a child seed from a master seed and a path of integer keys, e.g.
/// (master, instance, repetition, stream). The same path always yields the
/// same seed.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path) noexcept;

/// Seedable, splittable random source. Every stochastic operation in the
/// library takes one explicitly; nothing reads global state.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);
  double gamma(double shape);
  double beta(double a, double b);
  std::vector<double> dirichlet(std::span<const double> concentration);
  /// Independent child stream; advances this generator by one draw.
  Rng split();

 private:
  std::mt19937_64 engine_;
};

}  // namespace iamlearn
