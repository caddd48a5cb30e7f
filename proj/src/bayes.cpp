#include "iamlearn/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "iamlearn/error.hpp"
#include "iamlearn/likelihood.hpp"

namespace iamlearn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// x ln y with 0 ln 0 = 0.
double xlogy(double x, double y) {
  if (x == 0.0) return 0.0;
  return y > 0.0 ? x * std::log(y) : kNegInf;
}

double reflect_unit(double x) {
  while (x < 0.0 || x > 1.0) x = x < 0.0 ? -x : 2.0 - x;
  return x;
}

double sigmoid_of_difference(double a, double b) {
  if (a == kNegInf && b == kNegInf) return 0.5;
  if (a == kNegInf) return 0.0;
  if (b == kNegInf) return 1.0;
  return 1.0 / (1.0 + std::exp(b - a));
}

std::size_t sample_log_categorical(std::vector<double>& log_w, Rng& rng) {
  const double hi = *std::max_element(log_w.begin(), log_w.end());
  if (hi == kNegInf) return rng.index(log_w.size());
  double total = 0.0;
  for (double& x : log_w) {
    x = std::exp(x - hi);
    total += x;
  }
  const double u = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < log_w.size(); ++k) {
    if (log_w[k] <= 0.0) continue;
    acc += log_w[k];
    last = k;
    if (u < acc) return k;
  }
  return last;
}

// Per-component approval counts of the voters currently assigned to it.
struct ComponentStats {
  double voters = 0.0;
  std::vector<double> approvals;
};

// Parameters of one component in the sampler's working representation.
struct ComponentState {
  double phi = 0.5;
  double p = 0.5;
  ApprovalBallot central;
  std::vector<double> probs;  // full IAM
};

class Sampler {
 public:
  Sampler(const Election& e, const GibbsOptions& opts, Rng& rng)
      : e_(e), opts_(opts), rng_(rng), m_(e.num_candidates()), n_(e.num_voters()) {
    weights_.assign(opts.k, 1.0 / static_cast<double>(opts.k));
    assignment_.assign(n_, 0);
    states_.resize(opts.k);
    std::vector<std::size_t> seeds;
    if (n_ >= opts.k) {
      std::vector<std::size_t> idx(n_);
      std::iota(idx.begin(), idx.end(), 0);
      for (std::size_t i = 0; i < opts.k; ++i) std::swap(idx[i], idx[i + rng_.index(n_ - i)]);
      seeds.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(opts.k));
    }
    for (std::size_t k = 0; k < opts.k; ++k) {
      ComponentState& s = states_[k];
      switch (opts.family) {
        case Family::FullIam:
          s.probs.resize(m_);
          for (double& p : s.probs) p = rng_.uniform();
          break;
        case Family::Hamming:
        case Family::Resampling:
          if (!seeds.empty()) {
            s.central = e_.ballots()[seeds[k]];
          } else {
            s.central = ApprovalBallot(m_);
            for (std::size_t j = 0; j < m_; ++j) s.central.set(j, rng_.bernoulli(0.5));
          }
          break;
        default:
          throw Error(ErrorKind::BadConfig, "Gibbs sampling supports fulliam, hamming, resampling");
      }
    }
  }

  void sweep() {
    sample_assignments();
    const auto stats = collect_stats();
    sample_weights(stats);
    for (std::size_t k = 0; k < opts_.k; ++k) {
      switch (opts_.family) {
        case Family::FullIam: update_full_iam(states_[k], stats[k]); break;
        case Family::Hamming: update_hamming(states_[k], stats[k]); break;
        case Family::Resampling: update_resampling(states_[k], stats[k]); break;
        default: break;
      }
    }
  }

  Mixture snapshot() const {
    Mixture mix;
    std::vector<std::size_t> order(opts_.k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return weights_[a] > weights_[b]; });
    for (std::size_t k : order) {
      mix.weights.push_back(weights_[k]);
      mix.components.push_back(as_component(states_[k]));
    }
    return mix;
  }

 private:
  Component as_component(const ComponentState& s) const {
    switch (opts_.family) {
      case Family::Hamming: return Hamming{s.phi, s.central};
      case Family::Resampling: return Resampling{s.p, s.phi, s.central};
      default: return FullIam{s.probs};
    }
  }

  void sample_assignments() {
    std::vector<ComponentScorer> scorers;
    std::vector<double> log_w(opts_.k);
    for (std::size_t k = 0; k < opts_.k; ++k) {
      scorers.emplace_back(as_component(states_[k]));
      log_w[k] = weights_[k] > 0.0 ? std::log(weights_[k]) : kNegInf;
    }
    std::vector<double> terms(opts_.k);
    for (std::size_t i = 0; i < n_; ++i) {
      if (opts_.k == 1) break;
      const ApprovalBallot& b = e_.ballots()[i];
      for (std::size_t k = 0; k < opts_.k; ++k) {
        terms[k] = log_w[k] == kNegInf ? kNegInf : log_w[k] + scorers[k](b);
      }
      assignment_[i] = sample_log_categorical(terms, rng_);
    }
  }

  std::vector<ComponentStats> collect_stats() const {
    std::vector<ComponentStats> stats(opts_.k);
    for (auto& s : stats) s.approvals.assign(m_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      ComponentStats& s = stats[assignment_[i]];
      s.voters += 1.0;
      e_.ballots()[i].for_each_approved([&](std::size_t j) { s.approvals[j] += 1.0; });
    }
    return stats;
  }

  void sample_weights(const std::vector<ComponentStats>& stats) {
    std::vector<double> conc(opts_.k);
    for (std::size_t k = 0; k < opts_.k; ++k) conc[k] = 1.0 + stats[k].voters;
    weights_ = rng_.dirichlet(conc);
  }

  void update_full_iam(ComponentState& s, const ComponentStats& st) {
    for (std::size_t j = 0; j < m_; ++j) {
      s.probs[j] = rng_.beta(1.0 + st.approvals[j], 1.0 + st.voters - st.approvals[j]);
    }
  }

  template <class LogTarget>
  double metropolis(double current, LogTarget&& log_target) {
    const double proposal = reflect_unit(current + opts_.step * (2.0 * rng_.uniform() - 1.0));
    const double now = log_target(current);
    const double next = log_target(proposal);
    if (next == kNegInf) return current;
    if (now == kNegInf || next >= now) return proposal;
    return rng_.uniform() < std::exp(next - now) ? proposal : current;
  }

  void update_hamming(ComponentState& s, const ComponentStats& st) {
    const double log_agree = -std::log1p(s.phi);
    const double log_flip = s.phi > 0.0 ? std::log(s.phi) + log_agree : kNegInf;
    // Central bits: uniform prior, two-point full conditional.
    for (std::size_t j = 0; j < m_; ++j) {
      const double a = st.approvals[j];
      const double r = st.voters - a;
      const double one = xlog(a, log_agree) + xlog(r, log_flip);
      const double zero = xlog(a, log_flip) + xlog(r, log_agree);
      s.central.set(j, rng_.uniform() < sigmoid_of_difference(one, zero));
    }
    double h = 0.0;
    for (std::size_t j = 0; j < m_; ++j) {
      h += s.central[j] ? st.voters - st.approvals[j] : st.approvals[j];
    }
    const double slots = static_cast<double>(m_) * st.voters;
    s.phi = metropolis(s.phi, [&](double phi) { return xlogy(h, phi) - slots * std::log1p(phi); });
  }

  void update_resampling(ComponentState& s, const ComponentStats& st) {
    {
      const double q1 = (1.0 - s.phi) + s.phi * s.p;
      const double q1_not = s.phi * (1.0 - s.p);
      const double q0 = s.phi * s.p;
      const double q0_not = 1.0 - q0;
      const double prior_one = std::log(s.p);
      const double prior_zero = std::log1p(-s.p);
      for (std::size_t j = 0; j < m_; ++j) {
        const double a = st.approvals[j];
        const double r = st.voters - a;
        const double one = prior_one + xlogy(a, q1) + xlogy(r, q1_not);
        const double zero = prior_zero + xlogy(a, q0) + xlogy(r, q0_not);
        s.central.set(j, rng_.uniform() < sigmoid_of_difference(one, zero));
      }
    }
    double in_size = 0.0;
    double in_app = 0.0;
    double out_app = 0.0;
    for (std::size_t j = 0; j < m_; ++j) {
      if (s.central[j]) {
        in_size += 1.0;
        in_app += st.approvals[j];
      } else {
        out_app += st.approvals[j];
      }
    }
    const double out_size = static_cast<double>(m_) - in_size;
    const double in_slots = in_size * st.voters;
    const double out_slots = out_size * st.voters;
    auto log_target = [&](double phi, double p) {
      const double q1 = (1.0 - phi) + phi * p;
      const double q0 = phi * p;
      return xlogy(in_size, p) + xlogy(out_size, 1.0 - p) + xlogy(in_app, q1) +
             xlogy(in_slots - in_app, phi * (1.0 - p)) + xlogy(out_app, q0) +
             xlogy(out_slots - out_app, 1.0 - q0);
    };
    s.phi = metropolis(s.phi, [&](double phi) { return log_target(phi, s.p); });
    s.p = metropolis(s.p, [&](double p) { return log_target(s.phi, p); });
  }

  // c * log_value with 0 * (-inf) = 0.
  static double xlog(double c, double log_value) { return c == 0.0 ? 0.0 : c * log_value; }

  const Election& e_;
  const GibbsOptions& opts_;
  Rng& rng_;
  std::size_t m_;
  std::size_t n_;
  std::vector<double> weights_;
  std::vector<std::size_t> assignment_;
  std::vector<ComponentState> states_;
};

}  // namespace

PosteriorChain gibbs_fit(const Election& e, const GibbsOptions& opts, Rng& rng) {
  if (opts.k < 1) throw Error(ErrorKind::BadConfig, "k must be at least 1");
  if (opts.burn_in >= opts.total_samples) {
    throw Error(ErrorKind::BadConfig, "burn-in must be smaller than the number of samples");
  }
  if (!(opts.step > 0.0)) throw Error(ErrorKind::BadConfig, "Metropolis step must be positive");
  if (opts.family == Family::Ic) {
    throw Error(ErrorKind::BadConfig, "Gibbs sampling supports fulliam, hamming, resampling");
  }
  Sampler sampler(e, opts, rng);
  PosteriorChain chain;
  chain.burn_in = opts.burn_in;
  chain.family = opts.family;
  chain.k = opts.k;
  chain.samples.reserve(opts.total_samples);
  for (std::size_t s = 0; s < opts.total_samples; ++s) {
    sampler.sweep();
    chain.samples.push_back(sampler.snapshot());
  }
  return chain;
}

Mixture posterior_mean(const PosteriorChain& chain) {
  const auto kept = chain.burn_in < chain.samples.size() ? chain.retained()
                                                          : std::span<const Mixture>{};
  if (kept.empty()) throw Error(ErrorKind::EmptyChain, "no retained samples");
  const double count = static_cast<double>(kept.size());
  const std::size_t k = kept.front().weights.size();
  const std::size_t m = num_candidates(kept.front().components.front());

  Mixture mean;
  mean.weights.assign(k, 0.0);
  std::vector<double> phi(k, 0.0);
  std::vector<double> p(k, 0.0);
  std::vector<std::vector<double>> probs(k, std::vector<double>(m, 0.0));
  std::vector<std::vector<std::size_t>> votes(k, std::vector<std::size_t>(m, 0));

  for (const Mixture& s : kept) {
    for (std::size_t c = 0; c < k; ++c) {
      mean.weights[c] += s.weights[c];
      const Component& comp = s.components[c];
      if (const auto* f = std::get_if<FullIam>(&comp)) {
        for (std::size_t j = 0; j < m; ++j) probs[c][j] += f->probs[j];
      } else if (const auto* h = std::get_if<Hamming>(&comp)) {
        phi[c] += h->phi;
        h->central.for_each_approved([&](std::size_t j) { ++votes[c][j]; });
      } else if (const auto* r = std::get_if<Resampling>(&comp)) {
        phi[c] += r->phi;
        p[c] += r->p;
        r->central.for_each_approved([&](std::size_t j) { ++votes[c][j]; });
      } else {
        throw Error(ErrorKind::InvalidModel, "unsupported component in posterior chain");
      }
    }
  }

  const double total_weight = std::accumulate(mean.weights.begin(), mean.weights.end(), 0.0);
  for (double& w : mean.weights) w /= total_weight;
  for (std::size_t c = 0; c < k; ++c) {
    ApprovalBallot central(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (2 * votes[c][j] >= kept.size()) central.set(j);
    }
    switch (chain.family) {
      case Family::FullIam: {
        FullIam f{probs[c]};
        for (double& x : f.probs) x = std::clamp(x / count, 0.0, 1.0);
        mean.components.push_back(std::move(f));
        break;
      }
      case Family::Hamming:
        mean.components.push_back(Hamming{std::clamp(phi[c] / count, 0.0, 1.0), central});
        break;
      case Family::Resampling:
        mean.components.push_back(Resampling{std::clamp(p[c] / count, 0.0, 1.0),
                                             std::clamp(phi[c] / count, 0.0, 1.0), central});
        break;
      default:
        throw Error(ErrorKind::InvalidModel, "unsupported chain family");
    }
  }
  return mean;
}

void write_chain_jsonl(std::ostream& out, const PosteriorChain& chain) {
  for (const Mixture& s : chain.retained()) out << culture_to_json(Culture(s)).dump() << '\n';
}

}  // namespace iamlearn
