#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "helpers.hpp"
#include "iamlearn/assignment.hpp"
#include "iamlearn/error.hpp"
#include "iamlearn/metrics.hpp"

using namespace iamlearn;

namespace {

std::int64_t brute_force_total(const Election& a, const Election& b) {
  const std::size_t n = a.num_voters();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = -1;
  do {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < n; ++i) s += hamming(a.ballots()[i], b.ballots()[perm[i]]);
    if (best < 0 || s < best) best = s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Election shuffled(const Election& e, Rng& rng) {
  std::vector<std::size_t> order(e.num_voters());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  return e.select_voters(order);
}

}  // namespace

TEST_CASE("va_ham examples") {
  CHECK(va_ham(test::election(2, {{0}, {1}}), test::election(2, {{1}, {0}})) == 0.0);
  CHECK(va_ham(test::election(2, {{0}, {0}}), test::election(2, {{0, 1}, {}})) == 1.0);
  const Election e0 = test::e0();
  CHECK(va_ham(e0, e0) == 0.0);
  try {
    va_ham(e0, test::election(2, {{0}}));
    FAIL("expected UnequalSizes");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnequalSizes);
  }
  try {
    va_ham(e0, test::election(3, {{0}, {0}, {0}, {0}}));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("assignment solver matches enumeration") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.index(7);
    const std::size_t m = 1 + rng.index(10);
    const Election a = test::random_election(m, n, rng);
    const Election b = test::random_election(m, n, rng);
    CHECK(va_ham_total(a, b) == brute_force_total(a, b));
  }
}

TEST_CASE("solve_assignment returns a permutation achieving its cost") {
  Rng rng(2);
  const std::size_t n = 30;
  std::vector<std::int32_t> cost(n * n);
  for (auto& c : cost) c = static_cast<std::int32_t>(rng.index(100));
  const auto sol = solve_assignment(cost, n);
  std::vector<std::size_t> cols = sol.row_to_col;
  std::sort(cols.begin(), cols.end());
  for (std::size_t i = 0; i < n; ++i) CHECK(cols[i] == i);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += cost[i * n + sol.row_to_col[i]];
  CHECK(total == sol.total_cost);
  CHECK(solve_assignment({}, 0).total_cost == 0);
  CHECK_THROWS_AS(solve_assignment(cost, n + 1), Error);
}

TEST_CASE("metric properties") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.index(20);
    const std::size_t m = 1 + rng.index(10);
    const Election e = test::random_election(m, n, rng);
    const Election f = test::random_election(m, n, rng);
    const Election g = test::random_election(m, n, rng);
    CHECK(va_ham(e, f) == va_ham(f, e));
    CHECK(va_ham(e, e) == 0.0);
    CHECK(va_ham(e, g) <= va_ham(e, f) + va_ham(f, g) + 1e-9);
    CHECK(va_ham_total(shuffled(e, rng), shuffled(f, rng)) == va_ham_total(e, f));
  }
}

TEST_CASE("baseline") {
  const Election same = Election::with_default_roster(
      3, std::vector<ApprovalBallot>(40, test::ballot(3, {0, 2})));
  Rng rng(4);
  CHECK(baseline(same, 20, 5, rng) == 0.0);

  Rng data(5);
  const Election e = test::random_election(8, 100, data);
  Rng r1(6), r2(6);
  CHECK(baseline(e, 30, 1, r1) == baseline(e, 30, 1, r2));
  Rng r3(6);
  const auto [x, y] = sample_disjoint_pair(e, 30, r3);
  Rng r4(6);
  CHECK(baseline(e, 30, 1, r4) == va_ham(x, y));
  CHECK_THROWS_AS(baseline(e, 51, 5, r1), Error);
}

TEST_CASE("absolute distance") {
  Rng rng(7);
  const Election empty = Election::with_default_roster(4, std::vector<ApprovalBallot>(10, ApprovalBallot(4)));
  CHECK(absolute_distance(Ic{4, 0.0}, empty, rng) == 0.0);
  const Election full =
      Election::with_default_roster(4, std::vector<ApprovalBallot>(10, ApprovalBallot::full(4)));
  CHECK(absolute_distance(Ic{4, 0.0}, full, rng) == 4.0);
  CHECK_THROWS_AS(absolute_distance(Ic{5, 0.0}, full, rng), Error);

  Rng data(8);
  const Election e = test::random_election(6, 50, data);
  Rng a(9), b(9);
  const Culture c = FullIam{{0.1, 0.5, 0.5, 0.3, 0.9, 0.2}};
  CHECK(absolute_distance(c, e, a) == absolute_distance(c, e, b));
}

TEST_CASE("distance report") {
  const DistanceReport r = make_distance_report(1.5, 0.5);
  REQUIRE(r.relative);
  CHECK(std::abs(*r.relative * r.baseline - r.absolute) <= 1e-9);
  CHECK_FALSE(make_distance_report(1.5, 0.0).relative);
}
