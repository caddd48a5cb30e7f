#include "iamlearn/rng.hpp"

#include <algorithm>

#include "iamlearn/error.hpp"

namespace iamlearn {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t key : path) h = splitmix64(h ^ splitmix64(key + 0x632be59bd9b4e019ULL));
  return h;
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::BadConfig, "Rng::index on empty range");
  std::uniform_int_distribution<std::size_t> dist(0, n - 1);
  return dist(engine_);
}

double Rng::gamma(double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

double Rng::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  const double s = x + y;
  // Both draws underflowing only happens for tiny shapes.
  return s > 0.0 ? x / s : 0.5;
}

std::vector<double> Rng::dirichlet(std::span<const double> concentration) {
  std::vector<double> draws(concentration.size());
  double total = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    draws[i] = gamma(concentration[i]);
    total += draws[i];
  }
  if (total <= 0.0) {
    std::fill(draws.begin(), draws.end(), 1.0 / static_cast<double>(draws.size()));
    return draws;
  }
  for (double& d : draws) d /= total;
  return draws;
}

Rng Rng::split() { return Rng(engine_()); }

}  // namespace iamlearn
