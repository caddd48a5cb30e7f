#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "iamlearn/election.hpp"
#include "iamlearn/rng.hpp"

namespace test {

inline iamlearn::ApprovalBallot ballot(std::size_t m, std::initializer_list<std::size_t> approved) {
  return iamlearn::ApprovalBallot::from_indices(m, std::vector<std::size_t>(approved));
}

inline iamlearn::Election election(std::size_t m,
                                   std::initializer_list<std::initializer_list<std::size_t>> votes) {
  std::vector<iamlearn::ApprovalBallot> ballots;
  for (const auto& v : votes) ballots.push_back(ballot(m, v));
  return iamlearn::Election::with_default_roster(m, std::move(ballots));
}

// {a,b}, {a}, {a}, {}
inline iamlearn::Election e0() { return election(2, {{0, 1}, {0}, {0}, {}}); }

inline iamlearn::ApprovalBallot random_ballot(std::size_t m, double p, iamlearn::Rng& rng) {
  iamlearn::ApprovalBallot b(m);
  for (std::size_t j = 0; j < m; ++j) b.set(j, rng.bernoulli(p));
  return b;
}

// Each voter gets its own approval rate so elections are not all IC-like.
inline iamlearn::Election random_election(std::size_t m, std::size_t n, iamlearn::Rng& rng) {
  std::vector<iamlearn::ApprovalBallot> ballots;
  for (std::size_t i = 0; i < n; ++i) ballots.push_back(random_ballot(m, rng.uniform(), rng));
  return iamlearn::Election::with_default_roster(m, std::move(ballots));
}

// Vote number `code` of the 2^m votes, bit j = candidate j.
inline iamlearn::ApprovalBallot ballot_from_code(std::size_t m, std::size_t code) {
  iamlearn::ApprovalBallot b(m);
  for (std::size_t j = 0; j < m; ++j) b.set(j, (code >> j) & 1U);
  return b;
}

}  // namespace test
