#include "iamlearn/election.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "iamlearn/error.hpp"

namespace iamlearn {

namespace {

void check_subset(std::span<const std::size_t> subset, std::size_t m) {
  if (subset.empty()) throw Error(ErrorKind::EmptySubset, "candidate subset is empty");
  std::vector<bool> seen(m, false);
  for (std::size_t c : subset) {
    if (c >= m) {
      throw Error(ErrorKind::DimensionMismatch,
                  "candidate index " + std::to_string(c) + " out of range");
    }
    if (seen[c]) {
      throw Error(ErrorKind::DimensionMismatch,
                  "candidate index " + std::to_string(c) + " repeated in subset");
    }
    seen[c] = true;
  }
}

// First k entries of a uniformly shuffled 0..n-1 (partial Fisher-Yates).
std::vector<std::size_t> draw_without_replacement(std::size_t n, std::size_t k,
                                                  Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(idx[i], idx[i + rng.index(n - i)]);
  }
  return idx;
}

}  // namespace

Election::Election(std::vector<Candidate> candidates, std::vector<ApprovalBallot> ballots)
    : candidates_(std::move(candidates)), ballots_(std::move(ballots)) {
  const std::size_t m = candidates_.size();
  std::unordered_set<std::string> ids;
  for (std::size_t j = 0; j < m; ++j) {
    if (candidates_[j].index != j) {
      throw Error(ErrorKind::MalformedRecord, "candidate indices must be dense");
    }
    if (!ids.insert(candidates_[j].external_id).second) {
      throw Error(ErrorKind::DuplicateProjectId,
                  "duplicate candidate id '" + candidates_[j].external_id + "'");
    }
  }
  scores_.assign(m, 0);
  for (const auto& b : ballots_) {
    if (b.size() != m) {
      throw Error(ErrorKind::DimensionMismatch, "ballot length differs from roster size");
    }
    b.for_each_approved([&](std::size_t j) { ++scores_[j]; });
  }
}

Election Election::with_default_roster(std::size_t m, std::vector<ApprovalBallot> ballots) {
  std::vector<Candidate> roster(m);
  for (std::size_t j = 0; j < m; ++j) roster[j] = {std::to_string(j), j};
  return Election(std::move(roster), std::move(ballots));
}

Election Election::select_voters(std::span<const std::size_t> positions) const {
  std::vector<ApprovalBallot> picked;
  picked.reserve(positions.size());
  for (std::size_t i : positions) picked.push_back(ballots_.at(i));
  return Election(candidates_, std::move(picked));
}

double approval_fraction(const Election& e, std::span<const std::size_t> subset) {
  check_subset(subset, e.num_candidates());
  if (e.num_voters() == 0) throw Error(ErrorKind::EmptyElection, "election has no voters");
  std::size_t app = 0;
  for (std::size_t c : subset) app += e.scores()[c];
  return static_cast<double>(app) /
         (static_cast<double>(e.num_voters()) * static_cast<double>(subset.size()));
}

Election restrict(const Election& e, std::span<const std::size_t> subset) {
  check_subset(subset, e.num_candidates());
  std::vector<Candidate> roster;
  roster.reserve(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    roster.push_back({e.candidates()[subset[i]].external_id, i});
  }
  std::vector<ApprovalBallot> projected;
  projected.reserve(e.num_voters());
  for (const auto& b : e.ballots()) {
    ApprovalBallot p(subset.size());
    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (b[subset[i]]) p.set(i);
    }
    projected.push_back(std::move(p));
  }
  return Election(std::move(roster), std::move(projected));
}

Election concat(const Election& a, const Election& b) {
  if (a.num_candidates() != b.num_candidates()) {
    throw Error(ErrorKind::DimensionMismatch, "cannot concatenate elections over different rosters");
  }
  std::vector<ApprovalBallot> all = a.ballots();
  all.insert(all.end(), b.ballots().begin(), b.ballots().end());
  return Election(a.candidates(), std::move(all));
}

std::pair<Election, Election> split_learn_eval(const Election& e, std::size_t n_eval,
                                               std::size_t n_sample_cap, Rng& rng) {
  const std::size_t n = e.num_voters();
  if (n < n_eval + 1) {
    throw Error(ErrorKind::TooFewVoters, "need at least " + std::to_string(n_eval + 1) +
                                             " voters, have " + std::to_string(n));
  }
  std::vector<std::size_t> perm = draw_without_replacement(n, n_eval, rng);
  std::vector<std::size_t> eval(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_eval));
  std::vector<std::size_t> rest(perm.begin() + static_cast<std::ptrdiff_t>(n_eval), perm.end());
  if (rest.size() > n_sample_cap) {
    for (std::size_t i = 0; i < n_sample_cap; ++i) {
      std::swap(rest[i], rest[i + rng.index(rest.size() - i)]);
    }
    rest.resize(n_sample_cap);
  }
  std::sort(eval.begin(), eval.end());
  std::sort(rest.begin(), rest.end());
  return {e.select_voters(rest), e.select_voters(eval)};
}

std::pair<Election, Election> sample_disjoint_pair(const Election& e, std::size_t n_eval,
                                                   Rng& rng) {
  const std::size_t n = e.num_voters();
  if (n < 2 * n_eval) {
    throw Error(ErrorKind::TooFewVoters, "need at least " + std::to_string(2 * n_eval) +
                                             " voters, have " + std::to_string(n));
  }
  std::vector<std::size_t> perm = draw_without_replacement(n, 2 * n_eval, rng);
  std::vector<std::size_t> first(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_eval));
  std::vector<std::size_t> second(perm.begin() + static_cast<std::ptrdiff_t>(n_eval),
                                  perm.begin() + static_cast<std::ptrdiff_t>(2 * n_eval));
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  return {e.select_voters(first), e.select_voters(second)};
}

}  // namespace iamlearn
