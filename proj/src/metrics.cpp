#include "iamlearn/metrics.hpp"

#include <bit>

#include "iamlearn/assignment.hpp"
#include "iamlearn/error.hpp"

namespace iamlearn {

std::int64_t va_ham_total(const Election& a, const Election& b) {
  if (a.num_candidates() != b.num_candidates()) {
    throw Error(ErrorKind::DimensionMismatch, "elections have different candidate counts");
  }
  if (a.num_voters() != b.num_voters()) {
    throw Error(ErrorKind::UnequalSizes, "elections have different voter counts");
  }
  const std::size_t n = a.num_voters();
  if (n == 0) throw Error(ErrorKind::EmptyElection, "va_ham needs at least one voter");

  std::vector<std::int32_t> cost(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto wa = a.ballots()[i].words();
    for (std::size_t j = 0; j < n; ++j) {
      const auto wb = b.ballots()[j].words();
      std::int32_t d = 0;
      for (std::size_t w = 0; w < wa.size(); ++w) d += std::popcount(wa[w] ^ wb[w]);
      cost[i * n + j] = d;
    }
  }
  return solve_assignment(cost, n).total_cost;
}

double va_ham(const Election& a, const Election& b) {
  return static_cast<double>(va_ham_total(a, b)) / static_cast<double>(a.num_voters());
}

double baseline(const Election& e, std::size_t n_eval, std::size_t pairs, Rng& rng) {
  if (pairs == 0) throw Error(ErrorKind::BadConfig, "baseline needs at least one pair");
  double sum = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto [x, y] = sample_disjoint_pair(e, n_eval, rng);
    sum += va_ham(x, y);
  }
  return sum / static_cast<double>(pairs);
}

double absolute_distance(const Culture& c, const Election& e_eval, Rng& rng) {
  if (num_candidates(c) != e_eval.num_candidates()) {
    throw Error(ErrorKind::DimensionMismatch, "model and election have different candidate counts");
  }
  const Election sampled = sample_election(c, e_eval.num_voters(), rng);
  return va_ham(e_eval, sampled);
}

DistanceReport make_distance_report(double absolute, double baseline) {
  DistanceReport r{absolute, baseline, std::nullopt};
  if (baseline > 0.0) r.relative = absolute / baseline;
  return r;
}

}  // namespace iamlearn
