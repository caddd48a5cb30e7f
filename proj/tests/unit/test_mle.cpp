#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "iamlearn/error.hpp"
#include "iamlearn/likelihood.hpp"
#include "iamlearn/mle.hpp"

using namespace iamlearn;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

// Per-candidate probabilities of any independent model, for relabel-free comparisons.
std::vector<double> probs_of(const Culture& c) {
  return candidate_probabilities(std::visit(
      [](const auto& x) -> Component {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Mixture>) {
          return x.components.front();
        } else {
          return x;
        }
      },
      c));
}

}  // namespace

TEST_CASE("closed forms on E0") {
  const Election e = test::e0();
  CHECK(std::get<Ic>(fit_ic(e).model).p == 0.5);
  CHECK(std::get<FullIam>(fit_full_iam(e).model).probs == std::vector<double>{0.75, 0.25});
  const Hamming h = std::get<Hamming>(fit_hamming(e).model);
  CHECK(h.central == test::ballot(2, {0}));
  CHECK(h.phi == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("closed-form edge cases") {
  const Election all = test::election(3, {{0, 1, 2}, {0, 1, 2}});
  CHECK(std::get<Ic>(fit_ic(all).model).p == 1.0);
  CHECK(fit_ic(all).train_log_likelihood == 0.0);
  const Election none = test::election(3, {{}, {}, {}});
  CHECK(std::get<Ic>(fit_ic(none).model).p == 0.0);
  CHECK(std::get<FullIam>(fit_full_iam(test::election(2, {{0, 1}})).model).probs ==
        std::vector<double>{1.0, 1.0});
  CHECK(std::get<FullIam>(fit_full_iam(test::election(2, {{0}, {}})).model).probs[0] == 0.5);

  const Election same = test::election(4, {{1, 3}, {1, 3}, {1, 3}});
  const Hamming h = std::get<Hamming>(fit_hamming(same).model);
  CHECK(h.central == test::ballot(4, {1, 3}));
  CHECK(h.phi == 0.0);

  const Hamming tie = std::get<Hamming>(fit_hamming(test::election(1, {{0}, {}})).model);
  CHECK(tie.central == test::ballot(1, {0}));
  CHECK(tie.phi == 1.0);

  const Election empty = Election::with_default_roster(2, {});
  CHECK(kind_of([&] { fit_ic(empty); }) == ErrorKind::EmptyElection);
  CHECK(kind_of([&] { fit_full_iam(empty); }) == ErrorKind::EmptyElection);
  CHECK(kind_of([&] { fit_hamming(empty); }) == ErrorKind::EmptyElection);
  CHECK(kind_of([&] { fit_t_iam(empty, 1); }) == ErrorKind::EmptyElection);
}

TEST_CASE("t-IAM on E0") {
  const Election e = test::e0();
  const TParamIam t = std::get<TParamIam>(fit_t_iam(e, 2).model);
  CHECK(t.group_of[0] != t.group_of[1]);
  CHECK(t.probs[t.group_of[0]] == 0.75);
  CHECK(t.probs[t.group_of[1]] == 0.25);
  CHECK(std::abs(fit_t_iam(e, 2).train_log_likelihood - brute_force_t_iam(e, 2).train_log_likelihood) <=
        1e-12);
  CHECK(kind_of([&] { fit_t_iam(e, 0); }) == ErrorKind::BadArity);
  CHECK(kind_of([&] { fit_t_iam(e, 3); }) == ErrorKind::BadArity);
}

TEST_CASE("t = 1 is IC and t = m is the full IAM") {
  Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 1 + rng.index(12);
    const Election e = test::random_election(m, 1 + rng.index(40), rng);
    const auto one = fit_t_iam(e, 1);
    CHECK(probs_of(one.model) == probs_of(fit_ic(e).model));
    CHECK(one.train_log_likelihood == doctest::Approx(fit_ic(e).train_log_likelihood));
    const auto full = fit_t_iam(e, m);
    CHECK(probs_of(full.model) == probs_of(fit_full_iam(e).model));
    if (m <= 10) {
      CHECK(brute_force_t_iam(e, 1).train_log_likelihood ==
            doctest::Approx(fit_ic(e).train_log_likelihood));
    }
  }
}

TEST_CASE("DP matches exhaustive search") {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Election e = test::random_election(5, 10, rng);
    for (std::size_t t : {2, 3}) {
      CHECK(std::abs(fit_t_iam(e, t).train_log_likelihood -
                     brute_force_t_iam(e, t).train_log_likelihood) <= 1e-9);
    }
  }
  const Election big = test::random_election(11, 3, rng);
  CHECK(kind_of([&] { brute_force_t_iam(big, 2); }) == ErrorKind::TooLarge);
}

TEST_CASE("fit_t_iam_all agrees with individual fits and is monotone") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 1 + rng.index(12);
    const Election e = test::random_election(m, 1 + rng.index(50), rng);
    const auto all = fit_t_iam_all(e, m);
    REQUIRE(all.size() == m);
    for (std::size_t t = 1; t <= m; ++t) {
      CHECK(all[t - 1].model == fit_t_iam(e, t).model);
      if (t > 1) CHECK(all[t - 1].train_log_likelihood >= all[t - 2].train_log_likelihood - 1e-9);
    }
  }
}

TEST_CASE("partition is contiguous in score order") {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 2 + rng.index(10);
    const Election e = test::random_election(m, 1 + rng.index(30), rng);
    const std::size_t t = 1 + rng.index(m);
    const TParamIam fit = std::get<TParamIam>(fit_t_iam(e, t).model);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return e.scores()[a] > e.scores()[b]; });
    std::size_t changes = 0;
    for (std::size_t i = 1; i < m; ++i) {
      if (fit.group_of[order[i]] != fit.group_of[order[i - 1]]) ++changes;
    }
    CHECK(changes == t - 1);
  }
}

TEST_CASE("reported train LL equals log_prob_election") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 2 + rng.index(10);
    const Election e = test::random_election(m, 1 + rng.index(30), rng);
    for (const FitReport& r : {fit_ic(e), fit_full_iam(e), fit_hamming(e), fit_resampling(e),
                               fit_t_iam(e, 1 + rng.index(m))}) {
      CHECK(std::abs(r.train_log_likelihood - log_prob_election(r.model, e)) <= 1e-9);
    }
  }
}

TEST_CASE("perturbing a closed-form fit never helps") {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = 1 + rng.index(8);
    const Election e = test::random_election(m, 2 + rng.index(30), rng);

    const auto ic = fit_ic(e);
    const double p = std::get<Ic>(ic.model).p;
    for (double d : {-1e-3, 1e-3}) {
      CHECK(log_prob_election(Ic{m, std::clamp(p + d, 0.0, 1.0)}, e) <= ic.train_log_likelihood);
    }

    const auto full = fit_full_iam(e);
    const auto probs = std::get<FullIam>(full.model).probs;
    for (std::size_t j = 0; j < m; ++j) {
      for (double d : {-1e-3, 1e-3}) {
        auto q = probs;
        q[j] = std::clamp(q[j] + d, 0.0, 1.0);
        CHECK(log_prob_election(FullIam{q}, e) <= full.train_log_likelihood);
      }
    }

    const auto ham = fit_hamming(e);
    const Hamming h = std::get<Hamming>(ham.model);
    CHECK(h.phi <= 1.0);
    for (double d : {-1e-3, 1e-3}) {
      CHECK(log_prob_election(Hamming{std::clamp(h.phi + d, 0.0, 1.0), h.central}, e) <=
            ham.train_log_likelihood + 1e-12);
    }
    for (std::size_t j = 0; j < m; ++j) {
      Hamming flipped = h;
      flipped.central.set(j, !h.central[j]);
      CHECK(log_prob_election(flipped, e) <= ham.train_log_likelihood + 1e-12);
    }
  }
}

TEST_CASE("resampling fit is the 2-IAM fit") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 2 + rng.index(10);
    const Election e = test::random_election(m, 1 + rng.index(30), rng);
    CHECK(fit_resampling(e).train_log_likelihood ==
          doctest::Approx(fit_t_iam(e, 2).train_log_likelihood).epsilon(1e-12));
  }
  CHECK(kind_of([] { fit_resampling(test::election(1, {{0}})); }) == ErrorKind::BadArity);
}

TEST_CASE("block log-likelihood uses 0 ln 0 = 0") {
  CHECK(block_log_likelihood(0.0, 5.0) == 0.0);
  CHECK(block_log_likelihood(5.0, 5.0) == 0.0);
  CHECK(block_log_likelihood(1.0, 2.0) == doctest::Approx(2 * std::log(0.5)));
}
