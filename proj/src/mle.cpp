#include "iamlearn/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "iamlearn/error.hpp"
#include "iamlearn/likelihood.hpp"

namespace iamlearn {

namespace {

void require_voters(const ApprovalCounts& c) {
  if (!(c.total > 0.0)) throw Error(ErrorKind::EmptyElection, "no voter weight to learn from");
  if (c.scores.empty()) throw Error(ErrorKind::DimensionMismatch, "election has no candidates");
}

double fraction(double approvals, double slots) {
  return std::clamp(approvals / slots, 0.0, 1.0);
}

FitReport report(Culture model, const Election& e) {
  const double ll = log_prob_election(model, e);
  return FitReport{std::move(model), ll};
}

// Candidates by descending score, ties by ascending index.
std::vector<std::size_t> score_order(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

double block_log_likelihood(double approvals, double slots) {
  if (!(slots > 0.0)) return 0.0;
  const double k = std::clamp(approvals, 0.0, slots);
  const double rest = slots - k;
  double ll = 0.0;
  if (k > 0.0) ll += k * std::log(k / slots);
  if (rest > 0.0) ll += rest * std::log(rest / slots);
  return ll;
}

ApprovalCounts approval_counts(const Election& e) {
  ApprovalCounts c;
  c.scores.assign(e.scores().begin(), e.scores().end());
  c.total = static_cast<double>(e.num_voters());
  return c;
}

ApprovalCounts approval_counts(const Election& e, std::span<const double> weights) {
  if (weights.size() != e.num_voters()) {
    throw Error(ErrorKind::DimensionMismatch, "one weight per voter required");
  }
  ApprovalCounts c;
  c.scores.assign(e.num_candidates(), 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    c.total += w;
    if (w == 0.0) continue;
    e.ballots()[i].for_each_approved([&](std::size_t j) { c.scores[j] += w; });
  }
  return c;
}

Ic ic_from_counts(const ApprovalCounts& c) {
  require_voters(c);
  const double app = std::accumulate(c.scores.begin(), c.scores.end(), 0.0);
  return Ic{c.scores.size(), fraction(app, c.total * static_cast<double>(c.scores.size()))};
}

FullIam full_iam_from_counts(const ApprovalCounts& c) {
  require_voters(c);
  FullIam f;
  f.probs.reserve(c.scores.size());
  for (double s : c.scores) f.probs.push_back(fraction(s, c.total));
  return f;
}

Hamming hamming_from_counts(const ApprovalCounts& c) {
  require_voters(c);
  const std::size_t m = c.scores.size();
  ApprovalBallot central(m);
  double h = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    // "at least half" approve: ties join the central vote.
    if (2.0 * c.scores[j] >= c.total) {
      central.set(j);
      h += c.total - c.scores[j];
    } else {
      h += c.scores[j];
    }
  }
  const double slots = static_cast<double>(m) * c.total;
  const double phi = h > 0.0 ? std::clamp(h / (slots - h), 0.0, 1.0) : 0.0;
  return Hamming{phi, std::move(central)};
}

std::vector<TParamIam> t_iam_all_from_counts(const ApprovalCounts& c, std::size_t t_max) {
  require_voters(c);
  const std::size_t m = c.scores.size();
  if (t_max < 1 || t_max > m) {
    throw Error(ErrorKind::BadArity,
                "t=" + std::to_string(t_max) + " outside [1, " + std::to_string(m) + "]");
  }
  const std::vector<std::size_t> order = score_order(c.scores);
  std::vector<double> prefix(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + c.scores[order[i]];

  // block[i * (m + 1) + j]: best single-probability log-likelihood of sorted
  // candidates [i, j).
  std::vector<double> block((m + 1) * (m + 1), 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j <= m; ++j) {
      block[i * (m + 1) + j] =
          block_log_likelihood(prefix[j] - prefix[i], c.total * static_cast<double>(j - i));
    }
  }

  // best[l][j]: optimum for the first j sorted candidates in l blocks;
  // cut[l][j]: start of the last block in that optimum.
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best(t_max + 1, std::vector<double>(m + 1, kNegInf));
  std::vector<std::vector<std::size_t>> cut(t_max + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t j = 1; j <= m; ++j) best[1][j] = block[j];
  for (std::size_t l = 2; l <= t_max; ++l) {
    for (std::size_t j = l; j <= m; ++j) {
      for (std::size_t i = l - 1; i < j; ++i) {
        const double v = best[l - 1][i] + block[i * (m + 1) + j];
        if (v > best[l][j]) {
          best[l][j] = v;
          cut[l][j] = i;
        }
      }
    }
  }

  std::vector<TParamIam> fits;
  fits.reserve(t_max);
  for (std::size_t t = 1; t <= t_max; ++t) {
    std::vector<std::size_t> ends(t);
    std::size_t j = m;
    for (std::size_t l = t; l >= 1; --l) {
      ends[l - 1] = j;
      j = l == 1 ? 0 : cut[l][j];
    }
    TParamIam fit{std::vector<std::size_t>(m, 0), std::vector<double>(t, 0.0)};
    std::size_t start = 0;
    for (std::size_t g = 0; g < t; ++g) {
      for (std::size_t pos = start; pos < ends[g]; ++pos) fit.group_of[order[pos]] = g;
      fit.probs[g] = fraction(prefix[ends[g]] - prefix[start],
                              c.total * static_cast<double>(ends[g] - start));
      start = ends[g];
    }
    fits.push_back(std::move(fit));
  }
  return fits;
}

TParamIam t_iam_from_counts(const ApprovalCounts& c, std::size_t t) {
  auto all = t_iam_all_from_counts(c, t);
  return std::move(all.back());
}

FitReport fit_ic(const Election& e) { return report(ic_from_counts(approval_counts(e)), e); }

FitReport fit_full_iam(const Election& e) {
  return report(full_iam_from_counts(approval_counts(e)), e);
}

FitReport fit_hamming(const Election& e) {
  return report(hamming_from_counts(approval_counts(e)), e);
}

FitReport fit_t_iam(const Election& e, std::size_t t) {
  return report(t_iam_from_counts(approval_counts(e), t), e);
}

std::vector<FitReport> fit_t_iam_all(const Election& e, std::size_t t_max) {
  std::vector<FitReport> out;
  for (auto& fit : t_iam_all_from_counts(approval_counts(e), t_max)) {
    out.push_back(report(std::move(fit), e));
  }
  return out;
}

FitReport fit_resampling(const Election& e) {
  if (e.num_candidates() < 2) {
    throw Error(ErrorKind::BadArity, "a resampling fit needs at least 2 candidates");
  }
  return report(twoiam_to_resampling(t_iam_from_counts(approval_counts(e), 2)), e);
}

FitReport brute_force_t_iam(const Election& e, std::size_t t) {
  const std::size_t m = e.num_candidates();
  if (m > 10) throw Error(ErrorKind::TooLarge, "brute force limited to m <= 10");
  if (t < 1 || t > m) {
    throw Error(ErrorKind::BadArity, "t=" + std::to_string(t) + " outside [1, " + std::to_string(m) + "]");
  }
  if (e.num_voters() == 0) throw Error(ErrorKind::EmptyElection, "election has no voters");
  const double n = static_cast<double>(e.num_voters());
  const auto scores = e.scores();

  // Restricted growth strings: label[0] = 0, label[i] <= 1 + max(label[0..i)).
  std::vector<std::size_t> label(m, 0);
  std::vector<std::size_t> best_label;
  double best_ll = -std::numeric_limits<double>::infinity();
  std::vector<double> app(t);
  std::vector<double> size(t);

  auto evaluate = [&]() {
    std::fill(app.begin(), app.end(), 0.0);
    std::fill(size.begin(), size.end(), 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      app[label[j]] += static_cast<double>(scores[j]);
      size[label[j]] += 1.0;
    }
    double ll = 0.0;
    for (std::size_t g = 0; g < t; ++g) ll += block_log_likelihood(app[g], n * size[g]);
    if (ll > best_ll) {
      best_ll = ll;
      best_label = label;
    }
  };

  // blocks[i]: number of distinct labels in label[0..i].
  std::vector<std::size_t> blocks(m, 1);
  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == m) {
      if (blocks[m - 1] == t) evaluate();
      return;
    }
    const std::size_t used = blocks[i - 1];
    // Not enough candidates left to open the missing blocks.
    if (used + (m - i) < t) return;
    for (std::size_t g = 0; g <= used && g < t; ++g) {
      label[i] = g;
      blocks[i] = g == used ? used + 1 : used;
      self(self, i + 1);
    }
  };
  if (m == 1) {
    evaluate();
  } else {
    recurse(recurse, 1);
  }

  TParamIam fit{best_label, std::vector<double>(t, 0.0)};
  std::vector<double> best_app(t, 0.0);
  std::vector<double> best_size(t, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    best_app[best_label[j]] += static_cast<double>(scores[j]);
    best_size[best_label[j]] += 1.0;
  }
  for (std::size_t g = 0; g < t; ++g) fit.probs[g] = fraction(best_app[g], n * best_size[g]);
  return report(std::move(fit), e);
}

}  // namespace iamlearn
