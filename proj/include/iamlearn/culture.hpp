#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "iamlearn/ballot.hpp"
#include "iamlearn/election.hpp"
#include "iamlearn/rng.hpp"

namespace iamlearn {

/// p-IC: every candidate approved independently with probability p.
struct Ic {
  std::size_t m = 0;
  double p = 0.0;
  friend bool operator==(const Ic&, const Ic&) = default;
};

/// phi-Hamming: P(X) proportional to phi^ham(central, X).
struct Hamming {
  double phi = 0.0;
  ApprovalBallot central;
  friend bool operator==(const Hamming&, const Hamming&) = default;
};

/// (p, phi)-Resampling: copy the central vote, then resample each entry to
/// Bernoulli(p) with probability phi.
struct Resampling {
  double p = 0.0;
  double phi = 0.0;
  ApprovalBallot central;
  friend bool operator==(const Resampling&, const Resampling&) = default;
};

/// t-parameter IAM: candidate j approved with probability probs[group_of[j]].
struct TParamIam {
  std::vector<std::size_t> group_of;
  std::vector<double> probs;
  friend bool operator==(const TParamIam&, const TParamIam&) = default;
};

/// Full IAM: one approval probability per candidate.
struct FullIam {
  std::vector<double> probs;
  friend bool operator==(const FullIam&, const FullIam&) = default;
};

/// Anything that can be a mixture component.
using Component = std::variant<Ic, Hamming, Resampling, TParamIam, FullIam>;

struct Mixture {
  std::vector<double> weights;
  std::vector<Component> components;
  friend bool operator==(const Mixture&, const Mixture&) = default;
};

using Culture = std::variant<Ic, Hamming, Resampling, TParamIam, FullIam, Mixture>;

/// Component families a mixture may be built from (one family per mixture).
enum class Family { Ic, FullIam, Hamming, Resampling };

std::string_view to_string(Family f) noexcept;
Family parse_family(std::string_view name);
Family family_of(const Component& c);

Culture to_culture(const Component& c);
std::size_t num_candidates(const Component& c);
std::size_t num_candidates(const Culture& c);

/// Throws InvalidModel when a probability leaves [0, 1], groups are empty,
/// mixture weights do not sum to 1 (1e-12), components disagree on m, or a
/// mixture mixes families.
void validate(const Culture& c);

/// Every supported component is an independent approval model; this returns
/// the approval probability of each candidate.
std::vector<double> candidate_probabilities(const Component& c);

/// Copy with every effective approval probability kept inside [eps, 1 - eps].
/// Used only when scoring held-out data.
Culture clamp_probabilities(const Culture& c, double eps);
Component clamp_probabilities(const Component& c, double eps);

/// n i.i.d. votes. Independent-entry families consume exactly one uniform per
/// (voter, candidate) in row-major order, so equal seeds give coupled draws
/// across models.
Election sample_election(const Culture& c, std::size_t n, Rng& rng);

TParamIam resampling_to_2iam(double p, double phi, const ApprovalBallot& central);
Resampling twoiam_to_resampling(const TParamIam& two);
TParamIam hamming_to_2iam(double phi, const ApprovalBallot& central);

nlohmann::json culture_to_json(const Culture& c);
Culture culture_from_json(const nlohmann::json& j);

}  // namespace iamlearn
