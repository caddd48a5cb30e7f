#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "iamlearn/em.hpp"
#include "iamlearn/error.hpp"
#include "iamlearn/likelihood.hpp"

using namespace iamlearn;

namespace {

SoftAssignment make_assignment(const std::vector<std::vector<double>>& rows) {
  SoftAssignment g;
  g.n = rows.size();
  g.k = rows.front().size();
  g.totals.assign(g.k, 0.0);
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < g.k; ++k) {
      g.gamma.push_back(r[k]);
      g.totals[k] += r[k];
    }
  }
  return g;
}

// Expected complete-data log-likelihood for fixed components.
double expected_complete_ll(const Election& e, const SoftAssignment& g, const Mixture& mix,
                            const std::vector<double>& weights) {
  double s = 0.0;
  for (std::size_t i = 0; i < e.num_voters(); ++i) {
    for (std::size_t k = 0; k < g.k; ++k) {
      s += g(i, k) * (std::log(weights[k]) + log_prob_vote(mix.components[k], e.ballots()[i]));
    }
  }
  return s;
}

}  // namespace

TEST_CASE("e_step examples") {
  const Election e = test::e0();
  const SoftAssignment one = e_step(e, Mixture{{1.0}, {FullIam{{0.6, 0.3}}}});
  for (std::size_t i = 0; i < 4; ++i) CHECK(one(i, 0) == 1.0);

  const FullIam c{{0.6, 0.3}};
  const SoftAssignment sym = e_step(e, Mixture{{0.5, 0.5}, {c, c}});
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(sym(i, 0) == doctest::Approx(0.5));
    CHECK(sym(i, 1) == doctest::Approx(0.5));
  }

  const Election all = test::election(2, {{0, 1}});
  const SoftAssignment hard = e_step(all, Mixture{{0.5, 0.5}, {FullIam{{1.0, 1.0}}, FullIam{{0.0, 0.0}}}});
  CHECK(hard(0, 0) == 1.0);
  CHECK(hard(0, 1) == 0.0);

  const Election mixed = test::election(2, {{0}});
  const SoftAssignment lost = e_step(mixed, Mixture{{0.3, 0.7}, {FullIam{{1.0, 1.0}}, FullIam{{0.0, 0.0}}}});
  CHECK(lost(0, 0) == 0.5);
  CHECK(lost(0, 1) == 0.5);

  CHECK_THROWS_AS(e_step(test::election(3, {{0}}), Mixture{{1.0}, {c}}), Error);
}

TEST_CASE("soft assignment invariants") {
  Rng rng(1);
  const Election e = test::random_election(6, 40, rng);
  const Mixture mix{{0.2, 0.3, 0.5},
                    {FullIam{{0.1, 0.2, 0.9, 0.5, 0.5, 0.5}}, FullIam{{0.8, 0.8, 0.1, 0.2, 0.3, 0.4}},
                     FullIam{{0.5, 0.5, 0.5, 0.5, 0.5, 0.5}}}};
  const SoftAssignment g = e_step(e, mix);
  double total = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) {
    double row = 0.0;
    for (std::size_t k = 0; k < g.k; ++k) {
      CHECK(g(i, k) >= 0.0);
      CHECK(g(i, k) <= 1.0);
      row += g(i, k);
    }
    CHECK(std::abs(row - 1.0) <= 1e-9);
  }
  for (double t : g.totals) total += t;
  CHECK(std::abs(total - 40.0) <= 1e-6);
  CHECK(g.log_likelihood == doctest::Approx(log_prob_election(mix, e)).epsilon(1e-12));
}

TEST_CASE("m_step examples") {
  const Election e = test::e0();
  const SoftAssignment ones = make_assignment({{1}, {1}, {1}, {1}});
  const Mixture full = m_step(e, ones, Family::FullIam);
  CHECK(std::get<FullIam>(full.components[0]).probs == std::vector<double>{0.75, 0.25});
  CHECK(full.weights == std::vector<double>{1.0});

  const Mixture ham = m_step(e, ones, Family::Hamming);
  const Hamming h = std::get<Hamming>(ham.components[0]);
  CHECK(h.central == test::ballot(2, {0}));
  CHECK(h.phi == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const Election four = test::election(3, {{0, 1}, {0}, {2}, {1, 2}});
  const SoftAssignment halves = make_assignment({{1, 0}, {1, 0}, {0, 1}, {0, 1}});
  const Mixture split = m_step(four, halves, Family::FullIam);
  CHECK(split.weights == std::vector<double>{0.5, 0.5});
  CHECK(std::get<FullIam>(split.components[0]).probs == std::vector<double>{1.0, 0.5, 0.0});
  CHECK(std::get<FullIam>(split.components[1]).probs == std::vector<double>{0.0, 0.5, 1.0});

  const SoftAssignment empty = make_assignment({{1, 0}, {1, 0}, {1, 0}, {1, 0}});
  try {
    m_step(e, empty, Family::FullIam);
    FAIL("expected EmptyComponent");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::EmptyComponent);
  }
}

TEST_CASE("weighted M-step equals MLE on the replicated election") {
  Rng rng(2);
  const std::size_t q = 4;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 2 + rng.index(8);
    const std::size_t n = 2 + rng.index(15);
    const Election e = test::random_election(m, n, rng);
    std::vector<std::vector<double>> rows;
    std::vector<ApprovalBallot> replicated;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = rng.index(q + 1);
      rows.push_back({static_cast<double>(c) / q, static_cast<double>(q - c) / q});
      for (std::size_t r = 0; r < c; ++r) replicated.push_back(e.ballots()[i]);
    }
    if (replicated.empty() || replicated.size() == n * q) continue;
    const SoftAssignment g = make_assignment(rows);
    const Election induced = Election::with_default_roster(m, replicated);

    const auto full = std::get<FullIam>(m_step(e, g, Family::FullIam).components[0]).probs;
    const auto full_ref = std::get<FullIam>(fit_full_iam(induced).model).probs;
    for (std::size_t j = 0; j < m; ++j) CHECK(std::abs(full[j] - full_ref[j]) <= 1e-9);

    const double ic = std::get<Ic>(m_step(e, g, Family::Ic).components[0]).p;
    CHECK(std::abs(ic - std::get<Ic>(fit_ic(induced).model).p) <= 1e-9);

    const Hamming h = std::get<Hamming>(m_step(e, g, Family::Hamming).components[0]);
    const Hamming h_ref = std::get<Hamming>(fit_hamming(induced).model);
    CHECK(h.central == h_ref.central);
    CHECK(std::abs(h.phi - h_ref.phi) <= 1e-9);

    const Component r = m_step(e, g, Family::Resampling).components[0];
    CHECK(std::abs(log_prob_election(to_culture(r), induced) -
                   fit_resampling(induced).train_log_likelihood) <= 1e-9);
  }
}

TEST_CASE("M-step weights maximize the expected complete log-likelihood") {
  Rng rng(3);
  const Election e = test::random_election(5, 30, rng);
  const Mixture init{{0.3, 0.7}, {FullIam{{0.2, 0.3, 0.8, 0.6, 0.1}}, FullIam{{0.7, 0.6, 0.2, 0.1, 0.5}}}};
  const SoftAssignment g = e_step(e, init);
  const Mixture next = m_step(e, g, Family::FullIam);
  const double best = expected_complete_ll(e, g, next, next.weights);
  for (int trial = 0; trial < 20; ++trial) {
    auto w = next.weights;
    w[0] = std::clamp(w[0] + (rng.bernoulli(0.5) ? 1e-3 : -1e-3), 1e-6, 1.0);
    const double s = w[0] + w[1];
    for (double& x : w) x /= s;
    CHECK(expected_complete_ll(e, g, next, w) <= best);
  }
}

TEST_CASE("em_fit degenerate and deterministic cases") {
  Rng rng(4);
  const Election e = test::random_election(6, 80, rng);
  EmOptions opts;
  opts.k = 1;
  opts.family = Family::FullIam;
  Rng r1(7);
  const EmResult one = em_fit(e, opts, r1);
  CHECK(std::abs(one.fit.train_log_likelihood - fit_full_iam(e).train_log_likelihood) <= opts.tol);

  opts.k = 2;
  opts.family = Family::Hamming;
  Rng a(8), b(8);
  const EmResult ra = em_fit(e, opts, a);
  const EmResult rb = em_fit(e, opts, b);
  CHECK(ra.trace.log_likelihood == rb.trace.log_likelihood);
  CHECK(ra.fit.model == rb.fit.model);
  const auto& w = std::get<Mixture>(ra.fit.model).weights;
  CHECK(w[0] >= w[1]);

  opts.k = 81;
  CHECK_THROWS_AS(em_fit(e, opts, a), Error);
  opts.k = 1;
  CHECK_THROWS_AS(em_fit(Election::with_default_roster(3, {}), opts, a), Error);
}

TEST_CASE("EM never decreases the likelihood") {
  Rng rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t m = 2 + rng.index(12);
    const Election e = test::random_election(m, 20 + rng.index(150), rng);
    EmOptions opts;
    opts.k = 2 + rng.index(2);
    opts.restarts = 1;
    for (Family f : {Family::FullIam, Family::Hamming, Family::Resampling, Family::Ic}) {
      opts.family = f;
      const EmResult r = em_fit(e, opts, rng);
      const auto& ll = r.trace.log_likelihood;
      for (std::size_t i = 1; i < ll.size(); ++i) {
        if (std::find(r.trace.reinitialized_at.begin(), r.trace.reinitialized_at.end(), i - 1) !=
            r.trace.reinitialized_at.end()) {
          continue;
        }
        CHECK(ll[i] >= ll[i - 1] - 1e-7);
      }
      CHECK(std::abs(r.fit.train_log_likelihood - log_prob_election(r.fit.model, e)) <= 1e-9);
    }
  }
}
