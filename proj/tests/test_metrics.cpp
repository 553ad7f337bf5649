#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "credo/metrics.hpp"
#include "credo/rng.hpp"
#include "oracles.hpp"

using credo::classify_roles;
using credo::inverse_gini;
using credo::mean_population_reward;
using credo::per_agent_share;
using credo::prob_any_nonzero;
using credo::RngStream;
using credo::Role;

TEST_CASE("inverse_gini worked values") {
  CHECK(inverse_gini(std::vector<double>{5, 5, 5, 5}).value == 1.0);
  for (double r : {0.5, 1.0, 3.0, 100.0}) {
    CHECK(inverse_gini(std::vector<double>{0.0, r}).value == Catch::Approx(0.5));
  }
  CHECK(inverse_gini(std::vector<double>{0, 0, 0}).value == 1.0);
  CHECK_THROWS_AS(inverse_gini(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(inverse_gini(std::vector<double>{0, 0}, false), std::domain_error);
}

TEST_CASE("inverse_gini matches the brute-force double loop") {
  RngStream rng(credo::derive_seed(3, "metrics", "gini"));
  for (int it = 0; it < 500; ++it) {
    const int n = 1 + static_cast<int>(rng.uniform_below(50));
    std::vector<double> rewards;
    for (int i = 0; i < n; ++i) rewards.push_back(100.0 * rng.uniform());
    const double fast = inverse_gini(rewards).value;
    const double slow = oracles::inverse_gini_bruteforce(rewards);
    REQUIRE(std::abs(fast - slow) <= 1e-12);
  }
}

TEST_CASE("inverse_gini is invariant under positive scaling") {
  RngStream rng(credo::derive_seed(3, "metrics", "scale"));
  for (int it = 0; it < 100; ++it) {
    const int n = 2 + static_cast<int>(rng.uniform_below(20));
    std::vector<double> rewards, scaled;
    const double c = 0.01 + 50.0 * rng.uniform();
    for (int i = 0; i < n; ++i) {
      rewards.push_back(10.0 * rng.uniform());
      scaled.push_back(c * rewards.back());
    }
    REQUIRE(inverse_gini(scaled).value ==
            Catch::Approx(inverse_gini(rewards).value).margin(1e-12));
  }
}

TEST_CASE("mean_population_reward") {
  CHECK(mean_population_reward(std::vector<double>{320, 320, 320, 320, 320, 320}) == 320.0);
  CHECK(mean_population_reward(std::vector<double>{0, 0, 0, 0, 0, 0}) == 0.0);
  CHECK(mean_population_reward(std::vector<double>{1, 2, 3}) == 2.0);
  CHECK_THROWS_AS(mean_population_reward(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("classify_roles thresholds") {
  const auto census = classify_roles(std::vector<std::int64_t>{100, 0, 10},
                                     std::vector<std::int64_t>{2, 50, 10}, 3.0);
  CHECK(census.role[0] == Role::picker);
  CHECK(census.role[1] == Role::cleaner);
  CHECK(census.role[2] == Role::mixed);
  CHECK(census.count(Role::picker) == 1);

  CHECK_THROWS_AS(classify_roles(std::vector<std::int64_t>{1}, std::vector<std::int64_t>{1}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(classify_roles(std::vector<std::int64_t>{-1}, std::vector<std::int64_t>{1}),
                  std::invalid_argument);
}

TEST_CASE("classify_roles is permutation-equivariant") {
  RngStream rng(credo::derive_seed(3, "metrics", "roles"));
  std::vector<std::int64_t> apples, cleans;
  for (int i = 0; i < 12; ++i) {
    apples.push_back(static_cast<std::int64_t>(rng.uniform_below(80)));
    cleans.push_back(static_cast<std::int64_t>(rng.uniform_below(80)));
  }
  const auto base = classify_roles(apples, cleans);
  std::vector<int> perm(apples.size());
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  std::vector<std::int64_t> apples_p(apples.size()), cleans_p(cleans.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    apples_p[static_cast<std::size_t>(perm[i])] = apples[i];
    cleans_p[static_cast<std::size_t>(perm[i])] = cleans[i];
  }
  const auto permuted = classify_roles(apples_p, cleans_p);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    CHECK(permuted.role[static_cast<std::size_t>(perm[i])] == base.role[i]);
  }
}

TEST_CASE("prob_any_nonzero values and enumeration oracle") {
  CHECK(prob_any_nonzero(0.0, 5) == 0.0);
  CHECK(prob_any_nonzero(1.0, 3) == 1.0);
  CHECK(prob_any_nonzero(0.5, 2) == Catch::Approx(0.75));
  for (int n = 1; n <= 10; ++n) {
    REQUIRE(prob_any_nonzero(0.3, n) ==
            Catch::Approx(oracles::prob_any_nonzero_enumeration(0.3, n)).margin(1e-12));
  }
  CHECK_THROWS_AS(prob_any_nonzero(1.5, 2), std::invalid_argument);
  CHECK_THROWS_AS(prob_any_nonzero(0.5, 0), std::invalid_argument);
}

TEST_CASE("signal strength is monotone in group size") {
  for (int n = 1; n < 100; ++n) {
    REQUIRE(prob_any_nonzero(0.1, n + 1) > prob_any_nonzero(0.1, n));
    REQUIRE(per_agent_share(1.0, n + 1) < per_agent_share(1.0, n));
  }
  CHECK(per_agent_share(1.0, 1000000000) < 1e-8);  // share vanishes in the limit
}

TEST_CASE("per_agent_share worked values") {
  CHECK(per_agent_share(6.0, 6) == 1.0);
  CHECK(per_agent_share(1.0, 1) == 1.0);
  CHECK(per_agent_share(1.0, 4) == 0.25);
  CHECK_THROWS_AS(per_agent_share(1.0, 0), std::invalid_argument);
}
