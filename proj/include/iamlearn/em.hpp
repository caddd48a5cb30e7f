#pragma once

#include <cstddef>
#include <vector>

#include "iamlearn/culture.hpp"
#include "iamlearn/election.hpp"
#include "iamlearn/mle.hpp"
#include "iamlearn/rng.hpp"

namespace iamlearn {

/// Responsibilities gamma (n x K, row-major) and their column sums.
struct SoftAssignment {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<double> gamma;
  std::vector<double> totals;
  /// Mixture log-likelihood of the election, a by-product of the E-step.
  double log_likelihood = 0.0;

  double operator()(std::size_t voter, std::size_t component) const {
    return gamma[voter * k + component];
  }
};

SoftAssignment e_step(const Election& e, const Mixture& mix);

/// Weights gamma_k / n and per-component weighted MLE. Throws EmptyComponent
/// when some gamma_k < 1e-10.
Mixture m_step(const Election& e, const SoftAssignment& g, Family family);

struct EmOptions {
  std::size_t k = 2;
  Family family = Family::FullIam;
  std::size_t restarts = 5;
  std::size_t max_iter = 300;
  double tol = 1e-6;
};

struct EmTrace {
  std::vector<double> log_likelihood;
  std::size_t iterations = 0;
  bool converged = false;
  /// Iterations after which a collapsed component was re-seeded.
  std::vector<std::size_t> reinitialized_at;
};

struct EmResult {
  FitReport fit;
  EmTrace trace;
};

/// Best of opts.restarts EM runs; components ordered by descending weight.
EmResult em_fit(const Election& e, const EmOptions& opts, Rng& rng);

}  // namespace iamlearn
