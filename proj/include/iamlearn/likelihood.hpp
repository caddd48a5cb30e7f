#pragma once

#include <span>
#include <vector>

#include "iamlearn/ballot.hpp"
#include "iamlearn/culture.hpp"
#include "iamlearn/election.hpp"

namespace iamlearn {

/// ln(sum exp(x)), shifting by the running maximum. Returns -inf for an
/// empty input or when every term is -inf.
double log_sum_exp(std::span<const double> xs);

/// Log-probability of a ballot under an independent approval model with the
/// given per-candidate probabilities. Precomputes per-candidate log terms so
/// scoring costs O(m/64 + |A(v)|). Uses 0 ln 0 = 0.
class IamScorer {
 public:
  explicit IamScorer(std::span<const double> probs);
  double operator()(const ApprovalBallot& b) const;
  std::size_t size() const noexcept { return log_odds_.size(); }

 private:
  double base_ = 0.0;          // sum of ln(1 - p_j) over p_j < 1
  std::size_t certain_ = 0;    // number of candidates with p_j == 1
  std::vector<double> log_odds_;
  std::vector<unsigned char> is_certain_;
};

/// Log-probability of a ballot under one mixture component. Hamming uses its
/// closed form ham(U, X) ln(phi) - m ln(1 + phi); the other families go
/// through IamScorer.
class ComponentScorer {
 public:
  explicit ComponentScorer(const Component& c);
  double operator()(const ApprovalBallot& b) const;
  std::size_t size() const noexcept { return m_; }

 private:
  std::size_t m_ = 0;
  bool is_hamming_ = false;
  ApprovalBallot central_;
  double log_phi_ = 0.0;
  double log_norm_ = 0.0;
  IamScorer iam_;
};

double log_prob_vote(const Component& c, const ApprovalBallot& b);
double log_prob_vote(const Culture& c, const ApprovalBallot& b);
double log_prob_election(const Culture& c, const Election& e);

}  // namespace iamlearn
