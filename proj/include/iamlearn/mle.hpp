#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "iamlearn/culture.hpp"
#include "iamlearn/election.hpp"

namespace iamlearn {

struct FitReport {
  Culture model;
  double train_log_likelihood = 0.0;
};

FitReport fit_ic(const Election& e);
FitReport fit_full_iam(const Election& e);
/// Majoritarian central vote (ties approved) and phi = h / (mn - h).
FitReport fit_hamming(const Election& e);
/// Optimal t-parameter IAM via a dynamic program over contiguous blocks of
/// the candidates sorted by descending score.
FitReport fit_t_iam(const Election& e, std::size_t t);
/// fit_t_iam for every t in [1, t_max] from one DP table; element t-1 is t.
std::vector<FitReport> fit_t_iam_all(const Election& e, std::size_t t_max);
/// 2-parameter IAM fit expressed as a resampling model. Needs m >= 2.
FitReport fit_resampling(const Election& e);
/// Exhaustive search over all partitions into t nonempty groups. m <= 10.
FitReport brute_force_t_iam(const Election& e, std::size_t t);

/// Sufficient statistics for every single-model learner: per-candidate
/// (weighted) approval mass and the total voter weight. With unit weights
/// these are the approval scores and n.
struct ApprovalCounts {
  std::vector<double> scores;
  double total = 0.0;
};

ApprovalCounts approval_counts(const Election& e);
ApprovalCounts approval_counts(const Election& e, std::span<const double> weights);

Ic ic_from_counts(const ApprovalCounts& c);
FullIam full_iam_from_counts(const ApprovalCounts& c);
Hamming hamming_from_counts(const ApprovalCounts& c);
TParamIam t_iam_from_counts(const ApprovalCounts& c, std::size_t t);
std::vector<TParamIam> t_iam_all_from_counts(const ApprovalCounts& c,
                                             std::size_t t_max);

/// k ln(k/N) + (N-k) ln(1 - k/N) with 0 ln 0 = 0: the log-likelihood of a
/// block of N approve/disapprove decisions containing k approvals, at its
/// maximizing probability k/N.
double block_log_likelihood(double approvals, double slots);

}  // namespace iamlearn
