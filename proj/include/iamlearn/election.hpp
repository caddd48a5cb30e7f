#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iamlearn/ballot.hpp"
#include "iamlearn/rng.hpp"

namespace iamlearn {

struct Candidate {
  std::string external_id;
  std::size_t index = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Candidate roster plus an ordered (non-anonymous) ballot collection.
/// Immutable once built; approval scores are computed at construction.
class Election {
 public:
  Election() = default;
  Election(std::vector<Candidate> candidates, std::vector<ApprovalBallot> ballots);

  /// Roster with ids "0", "1", ..., m-1.
  static Election with_default_roster(std::size_t m,
                                      std::vector<ApprovalBallot> ballots);

  std::size_t num_candidates() const noexcept { return candidates_.size(); }
  std::size_t num_voters() const noexcept { return ballots_.size(); }
  const std::vector<Candidate>& candidates() const noexcept { return candidates_; }
  const std::vector<ApprovalBallot>& ballots() const noexcept { return ballots_; }
  const ApprovalBallot& ballot(std::size_t i) const { return ballots_.at(i); }
  /// |V(c)| per candidate.
  std::span<const std::size_t> scores() const noexcept { return scores_; }

  /// Sub-election with the voters at the given positions, in that order.
  Election select_voters(std::span<const std::size_t> positions) const;

  friend bool operator==(const Election&, const Election&) = default;

 private:
  std::vector<Candidate> candidates_;
  std::vector<ApprovalBallot> ballots_;
  std::vector<std::size_t> scores_;
};

/// app(B) / (n |B|).
double approval_fraction(const Election& e, std::span<const std::size_t> subset);

/// E(B): candidates reindexed densely in subset order, ballots projected.
Election restrict(const Election& e, std::span<const std::size_t> subset);

/// Voters of a followed by voters of b. Rosters must have equal size.
Election concat(const Election& a, const Election& b);

/// (learning, evaluation). Evaluation gets n_eval voters drawn uniformly
/// without replacement; learning gets the rest, down-sampled to
/// n_sample_cap. Both keep the original relative voter order.
std::pair<Election, Election> split_learn_eval(const Election& e,
                                               std::size_t n_eval,
                                               std::size_t n_sample_cap,
                                               Rng& rng);

/// Two voter-disjoint sub-elections of n_eval voters each.
std::pair<Election, Election> sample_disjoint_pair(const Election& e,
                                                   std::size_t n_eval, Rng& rng);

}  // namespace iamlearn
