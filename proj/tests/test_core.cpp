#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "credo/core.hpp"
#include "credo/rng.hpp"

using credo::CredoVector;
using credo::make_credo;
using credo::redistribute;
using credo::RngStream;
using credo::system_pot;
using credo::team_pot;
using credo::TeamStructure;
using credo::validate_credo;

namespace {

double total(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

// Random simplex point; occasionally a vertex or an edge point so the
// zero-weight channels get exercised.
CredoVector random_credo(RngStream& rng) {
  const auto pick = rng.uniform_below(10);
  if (pick == 0) {
    const auto v = rng.uniform_below(3);
    return CredoVector{v == 0 ? 1.0 : 0.0, v == 1 ? 1.0 : 0.0, v == 2 ? 1.0 : 0.0};
  }
  double a = -std::log(1.0 - rng.uniform());
  double b = -std::log(1.0 - rng.uniform());
  double c = -std::log(1.0 - rng.uniform());
  if (pick == 1) a = 0.0;
  if (pick == 2) b = 0.0;
  if (pick == 3) c = 0.0;
  const double s = a + b + c;
  return CredoVector{a / s, b / s, 1.0 - a / s - b / s};
}

TeamStructure random_structure(int n, RngStream& rng) {
  std::vector<int> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  rng.shuffle(ids);
  std::vector<std::vector<int>> teams;
  std::size_t at = 0;
  while (at < ids.size()) {
    const std::size_t size = 1 + rng.uniform_below(ids.size() - at);
    teams.emplace_back(ids.begin() + static_cast<std::ptrdiff_t>(at),
                       ids.begin() + static_cast<std::ptrdiff_t>(at + size));
    at += size;
  }
  return TeamStructure(n, std::move(teams));
}

}  // namespace

TEST_CASE("validate_credo accepts simplex points and names violations") {
  CHECK(!validate_credo(CredoVector{1.0, 0.0, 0.0}));
  CHECK(!validate_credo(CredoVector{0.2, 0.0, 0.8}));

  const auto sum_violation = validate_credo(CredoVector{0.5, 0.5, 0.5});
  REQUIRE(sum_violation.has_value());
  CHECK(sum_violation->find("1.5") != std::string::npos);

  const auto neg = validate_credo(CredoVector{-0.1, 0.3, 0.8});
  REQUIRE(neg.has_value());
  CHECK(neg->find("self_weight") != std::string::npos);

  CHECK_THROWS_AS(make_credo(0.5, 0.5, 0.5), std::invalid_argument);
  // 1e-9 tolerance: accepted at the boundary, rejected beyond it
  CHECK(!validate_credo(CredoVector{0.5, 0.5, 9e-10}));
  CHECK(validate_credo(CredoVector{0.5, 0.5, 2e-9}).has_value());
}

TEST_CASE("team structure is a disjoint full partition") {
  CHECK_THROWS_AS(TeamStructure(4, {{0, 1}, {1, 2, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(TeamStructure(4, {{0, 1}, {2}}), std::invalid_argument);  // 3 missing
  CHECK_THROWS_AS(TeamStructure(4, {{0, 1}, {}, {2, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(TeamStructure(2, {{0, 1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(TeamStructure::blocks(6, 4), std::invalid_argument);

  const auto s = TeamStructure::blocks(6, 2);
  CHECK(s.num_teams() == 3);
  CHECK(s.team_of(4) == 2);
  CHECK(s.team_members(1) == std::vector<int>{2, 3});
}

TEST_CASE("team_pot is the phi-weighted member sum") {
  const std::vector<int> team{0, 1};
  const std::vector<double> r12{1.0, 0.0};
  std::vector<CredoVector> credos{{0.0, 1.0, 0.0}, {0.0, 1.0, 0.0}};
  CHECK(team_pot(team, credos, r12) == 1.0);

  credos = {{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}};
  CHECK(team_pot(team, credos, std::vector<double>{2.0, 4.0}) == 3.0);

  credos = {{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  CHECK(team_pot(team, credos, std::vector<double>{5.0, 5.0}) == 0.0);

  const std::vector<int> bad{0, 7};
  CHECK_THROWS_AS(team_pot(bad, credos, r12), std::out_of_range);
}

TEST_CASE("system_pot is the omega-weighted population sum") {
  std::vector<CredoVector> credos{{0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 1.0}};
  CHECK(system_pot(credos, std::vector<double>{1.0, 1.0, 1.0}) == 3.0);

  credos = {{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  CHECK(system_pot(credos, std::vector<double>{7.0, 0.0, 0.0}) == 0.0);

  credos = {{0.2, 0.0, 0.8}, {0.8, 0.0, 0.2}, {0.6, 0.0, 0.4}};
  CHECK(system_pot(credos, std::vector<double>{1.0, 2.0, 3.0}) == Catch::Approx(2.4));

  CHECK_THROWS_AS(system_pot(credos, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("redistribute worked examples") {
  SECTION("pure self-focus is the identity") {
    const TeamStructure s(1, {{0}});
    const std::vector<CredoVector> credos{{1.0, 0.0, 0.0}};
    const auto out = redistribute(s, credos, std::vector<double>{3.25});
    CHECK(out == std::vector<double>{3.25});
  }
  SECTION("full team-focus splits the team pot by ratio") {
    const TeamStructure s(2, {{0, 1}});
    const std::vector<CredoVector> credos{{0.0, 1.0, 0.0}, {0.0, 1.0, 0.0}};
    const auto out = redistribute(s, credos, std::vector<double>{1.0, 0.0});
    CHECK(out[0] == Catch::Approx(0.5));
    CHECK(out[1] == Catch::Approx(0.5));
  }
  SECTION("full system-focus gives every agent r/N") {
    const TeamStructure s = TeamStructure::blocks(6, 2);
    const std::vector<CredoVector> credos(6, CredoVector{0.0, 0.0, 1.0});
    const auto out = redistribute(s, credos, std::vector<double>{6, 0, 0, 0, 0, 0});
    for (double v : out) CHECK(v == Catch::Approx(1.0));
  }
}

TEST_CASE("redistribute zero-weight channels contribute nothing") {
  // Nobody weights the team channel: the team pot is zero, members get only
  // their self and system shares.
  const TeamStructure s(2, {{0, 1}});
  const std::vector<CredoVector> credos{{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}};
  const auto out = redistribute(s, credos, std::vector<double>{4.0, 2.0});
  CHECK(out == std::vector<double>{4.0, 2.0});
}

TEST_CASE("redistribute conserves total reward on random instances") {
  RngStream rng(credo::derive_seed(11, "core", "conservation"));
  for (int it = 0; it < 1000; ++it) {
    const int n = 1 + static_cast<int>(rng.uniform_below(12));
    const auto structure = random_structure(n, rng);
    std::vector<CredoVector> credos;
    std::vector<double> rewards;
    for (int i = 0; i < n; ++i) {
      credos.push_back(random_credo(rng));
      rewards.push_back(-10.0 + 20.0 * rng.uniform());
    }
    const auto out = redistribute(structure, credos, rewards);
    REQUIRE(std::abs(total(out) - total(rewards)) <= 1e-9);
  }
}

TEST_CASE("redistribute reduces to the homogeneous closed form") {
  RngStream rng(credo::derive_seed(11, "core", "homogeneous"));
  for (int it = 0; it < 200; ++it) {
    const int n = 1 + static_cast<int>(rng.uniform_below(10));
    const auto structure = random_structure(n, rng);
    const CredoVector shared = random_credo(rng);
    const std::vector<CredoVector> credos(static_cast<std::size_t>(n), shared);
    std::vector<double> rewards;
    for (int i = 0; i < n; ++i) rewards.push_back(10.0 * rng.uniform());

    const auto out = redistribute(structure, credos, rewards);
    const double system_mean = total(rewards) / n;
    for (int i = 0; i < n; ++i) {
      const auto& team = structure.team_members(structure.team_of(i));
      double team_sum = 0.0;
      for (int id : team) team_sum += rewards[static_cast<std::size_t>(id)];
      const double expected = shared.self_weight * rewards[static_cast<std::size_t>(i)] +
                              shared.team_weight * team_sum / static_cast<double>(team.size()) +
                              shared.system_weight * system_mean;
      REQUIRE(std::abs(out[static_cast<std::size_t>(i)] - expected) <= 1e-9);
    }
  }
}

TEST_CASE("redistribute is scale-equivariant") {
  RngStream rng(credo::derive_seed(11, "core", "scale"));
  for (int it = 0; it < 100; ++it) {
    const int n = 2 + static_cast<int>(rng.uniform_below(8));
    const auto structure = random_structure(n, rng);
    std::vector<CredoVector> credos;
    std::vector<double> rewards, scaled;
    const double c = -4.0 + 8.0 * rng.uniform();
    for (int i = 0; i < n; ++i) {
      credos.push_back(random_credo(rng));
      rewards.push_back(-5.0 + 10.0 * rng.uniform());
      scaled.push_back(c * rewards.back());
    }
    const auto base = redistribute(structure, credos, rewards);
    const auto out = redistribute(structure, credos, scaled);
    for (int i = 0; i < n; ++i) {
      REQUIRE(out[static_cast<std::size_t>(i)] ==
              Catch::Approx(c * base[static_cast<std::size_t>(i)]).margin(1e-12));
    }
  }
}

TEST_CASE("redistribute is permutation-equivariant") {
  RngStream rng(credo::derive_seed(11, "core", "permute"));
  for (int it = 0; it < 100; ++it) {
    const int n = 2 + static_cast<int>(rng.uniform_below(8));
    const auto structure = random_structure(n, rng);
    std::vector<CredoVector> credos;
    std::vector<double> rewards;
    for (int i = 0; i < n; ++i) {
      credos.push_back(random_credo(rng));
      rewards.push_back(rng.uniform());
    }
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);

    std::vector<std::vector<int>> relabeled_teams;
    for (const auto& team : structure.teams()) {
      std::vector<int> mapped;
      for (int id : team) mapped.push_back(perm[static_cast<std::size_t>(id)]);
      relabeled_teams.push_back(std::move(mapped));
    }
    const TeamStructure relabeled(n, std::move(relabeled_teams));
    std::vector<CredoVector> credos_p(static_cast<std::size_t>(n));
    std::vector<double> rewards_p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      credos_p[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
          credos[static_cast<std::size_t>(i)];
      rewards_p[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
          rewards[static_cast<std::size_t>(i)];
    }

    const auto base = redistribute(structure, credos, rewards);
    const auto out = redistribute(relabeled, credos_p, rewards_p);
    for (int i = 0; i < n; ++i) {
      REQUIRE(out[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] ==
              Catch::Approx(base[static_cast<std::size_t>(i)]).margin(1e-12));
    }
  }
}

TEST_CASE("redistribute maps zero rewards to zero rewards") {
  const auto structure = TeamStructure::blocks(6, 3);
  RngStream rng(8);
  std::vector<CredoVector> credos;
  for (int i = 0; i < 6; ++i) credos.push_back(random_credo(rng));
  const std::vector<double> zeros(6, 0.0);
  CHECK(redistribute(structure, credos, zeros) == zeros);
}
