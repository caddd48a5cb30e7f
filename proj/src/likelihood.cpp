#include "iamlearn/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "iamlearn/error.hpp"

namespace iamlearn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_size(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw Error(ErrorKind::DimensionMismatch, "model has m=" + std::to_string(expected) +
                                                  " but ballot has " + std::to_string(got));
  }
}

std::vector<double> probs_for_scorer(const Component& c) {
  if (std::holds_alternative<Hamming>(c)) return {};
  return candidate_probabilities(c);
}

}  // namespace

double log_sum_exp(std::span<const double> xs) {
  double hi = kNegInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

IamScorer::IamScorer(std::span<const double> probs)
    : log_odds_(probs.size(), 0.0), is_certain_(probs.size(), 0) {
  for (std::size_t j = 0; j < probs.size(); ++j) {
    const double p = probs[j];
    if (p >= 1.0) {
      is_certain_[j] = 1;
      ++certain_;
    } else {
      const double log_not = std::log1p(-p);
      base_ += log_not;
      log_odds_[j] = (p > 0.0 ? std::log(p) : kNegInf) - log_not;
    }
  }
}

double IamScorer::operator()(const ApprovalBallot& b) const {
  check_size(log_odds_.size(), b.size());
  double score = base_;
  std::size_t certain_hit = 0;
  b.for_each_approved([&](std::size_t j) {
    if (is_certain_[j]) {
      ++certain_hit;
    } else {
      score += log_odds_[j];
    }
  });
  if (certain_hit < certain_) return kNegInf;
  return score;
}

ComponentScorer::ComponentScorer(const Component& c)
    : m_(num_candidates(c)), iam_(probs_for_scorer(c)) {
  if (const auto* h = std::get_if<Hamming>(&c)) {
    is_hamming_ = true;
    central_ = h->central;
    log_phi_ = h->phi > 0.0 ? std::log(h->phi) : kNegInf;
    log_norm_ = static_cast<double>(m_) * std::log1p(h->phi);
  }
}

double ComponentScorer::operator()(const ApprovalBallot& b) const {
  if (!is_hamming_) return iam_(b);
  check_size(m_, b.size());
  const std::size_t d = hamming(central_, b);
  // 0 ln 0 = 0: with phi = 0 the central vote itself has probability one.
  const double spread = d == 0 ? 0.0 : static_cast<double>(d) * log_phi_;
  return spread - log_norm_;
}

double log_prob_vote(const Component& c, const ApprovalBallot& b) {
  return ComponentScorer(c)(b);
}

double log_prob_vote(const Culture& c, const ApprovalBallot& b) {
  if (const auto* mix = std::get_if<Mixture>(&c)) {
    std::vector<double> terms(mix->components.size());
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const double w = mix->weights[k];
      terms[k] = w > 0.0 ? std::log(w) + log_prob_vote(mix->components[k], b) : kNegInf;
    }
    return log_sum_exp(terms);
  }
  return std::visit(
      [&](const auto& x) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Mixture>) {
          return kNegInf;
        } else {
          return log_prob_vote(Component(x), b);
        }
      },
      c);
}

double log_prob_election(const Culture& c, const Election& e) {
  check_size(num_candidates(c), e.num_candidates());
  double total = 0.0;
  if (const auto* mix = std::get_if<Mixture>(&c)) {
    std::vector<ComponentScorer> scorers;
    std::vector<double> log_w;
    for (std::size_t k = 0; k < mix->components.size(); ++k) {
      scorers.emplace_back(mix->components[k]);
      log_w.push_back(mix->weights[k] > 0.0 ? std::log(mix->weights[k]) : kNegInf);
    }
    std::vector<double> terms(scorers.size());
    for (const auto& b : e.ballots()) {
      for (std::size_t k = 0; k < scorers.size(); ++k) {
        terms[k] = log_w[k] == kNegInf ? kNegInf : log_w[k] + scorers[k](b);
      }
      total += log_sum_exp(terms);
    }
    return total;
  }
  const Component comp = std::visit(
      [](const auto& x) -> Component {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Mixture>) {
          return Ic{};
        } else {
          return x;
        }
      },
      c);
  const ComponentScorer scorer(comp);
  for (const auto& b : e.ballots()) total += scorer(b);
  return total;
}

}  // namespace iamlearn
