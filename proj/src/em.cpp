#include "iamlearn/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "iamlearn/error.hpp"
#include "iamlearn/likelihood.hpp"

namespace iamlearn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kEmptyComponent = 1e-10;
constexpr double kStepClamp = 1e-9;
constexpr double kInitLow = 0.05;
constexpr double kInitHigh = 0.95;

double init_uniform(Rng& rng) { return kInitLow + (kInitHigh - kInitLow) * rng.uniform(); }

Component fit_component(const Election& e, std::span<const double> weights, Family family) {
  const ApprovalCounts counts = approval_counts(e, weights);
  switch (family) {
    case Family::Ic: return ic_from_counts(counts);
    case Family::FullIam: return full_iam_from_counts(counts);
    case Family::Hamming: return hamming_from_counts(counts);
    case Family::Resampling:
      if (e.num_candidates() < 2) {
        throw Error(ErrorKind::BadArity, "resampling components need at least 2 candidates");
      }
      return twoiam_to_resampling(t_iam_from_counts(counts, 2));
  }
  throw Error(ErrorKind::BadConfig, "unknown family");
}

// Fresh component; `seed_vote` anchors the central vote (or the full-IAM
// probabilities) when given.
Component random_component(std::size_t m, Family family, const ApprovalBallot* seed_vote,
                           Rng& rng) {
  switch (family) {
    case Family::Ic: return Ic{m, init_uniform(rng)};
    case Family::FullIam: {
      FullIam f{std::vector<double>(m)};
      for (std::size_t j = 0; j < m; ++j) {
        f.probs[j] = seed_vote != nullptr ? ((*seed_vote)[j] ? kInitHigh : kInitLow)
                                          : init_uniform(rng);
      }
      return f;
    }
    case Family::Hamming: {
      const double phi = init_uniform(rng);
      return Hamming{phi, seed_vote != nullptr ? *seed_vote : ApprovalBallot(m)};
    }
    case Family::Resampling: {
      const double p = init_uniform(rng);
      const double phi = init_uniform(rng);
      return Resampling{p, phi, seed_vote != nullptr ? *seed_vote : ApprovalBallot(m)};
    }
  }
  throw Error(ErrorKind::BadConfig, "unknown family");
}

Mixture initialize(const Election& e, const EmOptions& opts, Rng& rng) {
  const std::size_t m = e.num_candidates();
  const std::size_t n = e.num_voters();
  Mixture mix;
  mix.weights.assign(opts.k, 1.0 / static_cast<double>(opts.k));
  const bool needs_central = opts.family == Family::Hamming || opts.family == Family::Resampling;
  std::vector<std::size_t> picks;
  if (needs_central) {
    // k distinct voter positions.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < opts.k; ++i) std::swap(idx[i], idx[i + rng.index(n - i)]);
    picks.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(opts.k));
  }
  for (std::size_t c = 0; c < opts.k; ++c) {
    const ApprovalBallot* seed = needs_central ? &e.ballots()[picks[c]] : nullptr;
    mix.components.push_back(random_component(m, opts.family, seed, rng));
  }
  return mix;
}

std::vector<double> column(const SoftAssignment& g, std::size_t k) {
  std::vector<double> w(g.n);
  for (std::size_t v = 0; v < g.n; ++v) w[v] = g(v, k);
  return w;
}

void normalize(std::vector<double>& w) {
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
}

// M-step that re-seeds collapsed components from a random training vote
// instead of failing. Returns whether any component was re-seeded.
bool m_step_or_reseed(const Election& e, const SoftAssignment& g, Family family, Rng& rng,
                      Mixture& out) {
  const double n = static_cast<double>(g.n);
  out.weights.assign(g.k, 0.0);
  out.components.clear();
  bool reseeded = false;
  for (std::size_t k = 0; k < g.k; ++k) {
    if (g.totals[k] < kEmptyComponent) {
      const ApprovalBallot& vote = e.ballots()[rng.index(g.n)];
      out.components.push_back(random_component(e.num_candidates(), family, &vote, rng));
      out.weights[k] = 1.0 / static_cast<double>(g.k);
      reseeded = true;
    } else {
      out.components.push_back(fit_component(e, column(g, k), family));
      out.weights[k] = g.totals[k] / n;
    }
  }
  normalize(out.weights);
  return reseeded;
}

Mixture sorted_by_weight(const Mixture& mix) {
  std::vector<std::size_t> order(mix.weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mix.weights[a] > mix.weights[b]; });
  Mixture out;
  for (std::size_t k : order) {
    out.weights.push_back(mix.weights[k]);
    out.components.push_back(mix.components[k]);
  }
  return out;
}

}  // namespace

SoftAssignment e_step(const Election& e, const Mixture& mix) {
  validate(mix);
  if (num_candidates(Culture(mix)) != e.num_candidates()) {
    throw Error(ErrorKind::DimensionMismatch, "mixture and election disagree on m");
  }
  SoftAssignment g;
  g.n = e.num_voters();
  g.k = mix.components.size();
  g.gamma.assign(g.n * g.k, 0.0);
  g.totals.assign(g.k, 0.0);

  std::vector<ComponentScorer> scorers;
  std::vector<double> log_w(g.k);
  for (std::size_t k = 0; k < g.k; ++k) {
    scorers.emplace_back(mix.components[k]);
    log_w[k] = mix.weights[k] > 0.0 ? std::log(mix.weights[k]) : kNegInf;
  }
  std::vector<double> terms(g.k);
  for (std::size_t v = 0; v < g.n; ++v) {
    const ApprovalBallot& b = e.ballots()[v];
    for (std::size_t k = 0; k < g.k; ++k) {
      terms[k] = log_w[k] == kNegInf ? kNegInf : log_w[k] + scorers[k](b);
    }
    const double norm = log_sum_exp(terms);
    g.log_likelihood += norm;
    double* row = &g.gamma[v * g.k];
    if (norm == kNegInf) {
      std::fill(row, row + g.k, 1.0 / static_cast<double>(g.k));
    } else {
      for (std::size_t k = 0; k < g.k; ++k) row[k] = std::exp(terms[k] - norm);
    }
    for (std::size_t k = 0; k < g.k; ++k) g.totals[k] += row[k];
  }
  return g;
}

Mixture m_step(const Election& e, const SoftAssignment& g, Family family) {
  if (g.n != e.num_voters() || g.gamma.size() != g.n * g.k) {
    throw Error(ErrorKind::DimensionMismatch, "soft assignment does not match the election");
  }
  for (std::size_t k = 0; k < g.k; ++k) {
    if (g.totals[k] < kEmptyComponent) {
      throw Error(ErrorKind::EmptyComponent,
                  "component " + std::to_string(k) + " has no responsibility mass");
    }
  }
  Mixture out;
  for (std::size_t k = 0; k < g.k; ++k) {
    out.components.push_back(fit_component(e, column(g, k), family));
    out.weights.push_back(g.totals[k] / static_cast<double>(g.n));
  }
  normalize(out.weights);
  return out;
}

EmResult em_fit(const Election& e, const EmOptions& opts, Rng& rng) {
  if (e.num_voters() == 0) throw Error(ErrorKind::EmptyElection, "election has no voters");
  if (opts.k < 1 || opts.k > e.num_voters()) {
    throw Error(ErrorKind::BadArity, "need 1 <= k <= n, got k=" + std::to_string(opts.k));
  }
  if (opts.restarts < 1) throw Error(ErrorKind::BadConfig, "at least one restart required");

  std::optional<EmResult> best;
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    Rng run = rng.split();
    Mixture mix = initialize(e, opts, run);
    EmTrace trace;
    for (std::size_t it = 0;; ++it) {
      const auto scored = std::get<Mixture>(clamp_probabilities(Culture(mix), kStepClamp));
      const SoftAssignment g = e_step(e, scored);
      trace.log_likelihood.push_back(g.log_likelihood);
      if (it > 0) {
        const double prev = trace.log_likelihood[it - 1];
        if (std::abs(g.log_likelihood - prev) < opts.tol) {
          trace.converged = true;
          break;
        }
      }
      if (it == opts.max_iter) break;
      if (m_step_or_reseed(e, g, opts.family, run, mix)) trace.reinitialized_at.push_back(it);
      ++trace.iterations;
    }
    const Mixture ordered = sorted_by_weight(mix);
    const double ll = log_prob_election(ordered, e);
    if (!best || ll > best->fit.train_log_likelihood) {
      best = EmResult{FitReport{ordered, ll}, std::move(trace)};
    }
  }
  return std::move(*best);
}

}  // namespace iamlearn
