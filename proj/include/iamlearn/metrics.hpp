#pragma once

#include <cstddef>
#include <optional>

#include "iamlearn/ballot.hpp"
#include "iamlearn/culture.hpp"
#include "iamlearn/election.hpp"
#include "iamlearn/rng.hpp"

namespace iamlearn {

/// Voter-anonymous Hamming distance: minimum over voter matchings of the
/// average matched Hamming distance. Exact.
double va_ham(const Election& a, const Election& b);

/// Integer numerator of va_ham (the optimal total matched distance).
std::int64_t va_ham_total(const Election& a, const Election& b);

/// Mean va_ham over `pairs` random voter-disjoint sub-election pairs.
double baseline(const Election& e, std::size_t n_eval, std::size_t pairs, Rng& rng);

/// va_ham between e_eval and |e_eval| fresh votes drawn from c.
double absolute_distance(const Culture& c, const Election& e_eval, Rng& rng);

struct DistanceReport {
  double absolute = 0.0;
  double baseline = 0.0;
  /// Empty when the baseline is zero.
  std::optional<double> relative;
};

DistanceReport make_distance_report(double absolute, double baseline);

}  // namespace iamlearn
