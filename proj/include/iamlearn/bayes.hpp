#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "iamlearn/culture.hpp"
#include "iamlearn/election.hpp"
#include "iamlearn/rng.hpp"

namespace iamlearn {

struct GibbsOptions {
  std::size_t k = 1;
  Family family = Family::FullIam;
  std::size_t total_samples = 2000;
  std::size_t burn_in = 1000;
  /// Random-walk step for the Metropolis updates of phi and p.
  double step = 0.05;
};

struct PosteriorChain {
  std::vector<Mixture> samples;
  std::size_t burn_in = 0;
  Family family = Family::FullIam;
  std::size_t k = 0;

  std::span<const Mixture> retained() const {
    return std::span<const Mixture>(samples).subspan(burn_in);
  }
};

/// Gibbs sampler (Metropolis-within-Gibbs for phi and p) for mixtures of
/// full-IAM, Hamming or resampling components under Dirichlet(1) / uniform
/// priors. Each stored state has components sorted by descending weight.
PosteriorChain gibbs_fit(const Election& e, const GibbsOptions& opts, Rng& rng);

/// Coordinate-wise mean of the retained states; central votes by per-bit
/// majority (ties approve).
Mixture posterior_mean(const PosteriorChain& chain);

/// One retained state per line, in the culture JSON schema.
void write_chain_jsonl(std::ostream& out, const PosteriorChain& chain);

}  // namespace iamlearn
