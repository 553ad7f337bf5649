#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "credo/rng.hpp"

using credo::derive_seed;
using credo::RngStream;

TEST_CASE("derive_seed is a pure function of master seed and labels") {
  CHECK(derive_seed(42, "trial", 3, "env") == derive_seed(42, "trial", 3, "env"));
  CHECK(derive_seed(42, "trial", 3, "env") != derive_seed(43, "trial", 3, "env"));
  CHECK(derive_seed(42, "trial", 3, "env") != derive_seed(42, "trial", 4, "env"));
  // differs in the final label only
  CHECK(derive_seed(42, "trial", 3, "behavior") != derive_seed(42, "trial", 3, "credo"));
}

TEST_CASE("derive_seed rejects empty label lists") {
  std::vector<std::string> none;
  CHECK_THROWS_AS(derive_seed(1, std::span<const std::string>(none)), std::invalid_argument);
}

TEST_CASE("derive_seed label boundaries cannot collide by concatenation") {
  CHECK(derive_seed(7, "ab", "c") != derive_seed(7, "a", "bc"));
  CHECK(derive_seed(7, "trial", 12) != derive_seed(7, "trial", 1, 2));
}

TEST_CASE("derive_seed has no collisions over an experiment's label set") {
  std::set<std::uint64_t> seeds;
  int count = 0;
  for (int trial = 0; trial < 50; ++trial) {
    seeds.insert(derive_seed(99, "trial", trial));
    seeds.insert(derive_seed(99, "trial", trial, "env"));
    count += 2;
    for (int agent = 0; agent < 12; ++agent) {
      seeds.insert(derive_seed(99, "trial", trial, "agent", agent, "behavior"));
      seeds.insert(derive_seed(99, "trial", trial, "agent", agent, "credo"));
      count += 2;
    }
  }
  CHECK(seeds.size() == static_cast<std::size_t>(count));
}

TEST_CASE("RngStream draws are deterministic per seed") {
  RngStream a(123), b(123), c(124);
  bool diverged = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    if (va != c.next_u64()) diverged = true;
  }
  CHECK(diverged);
}

TEST_CASE("uniform stays in [0,1) and uniform_below respects its bound") {
  RngStream rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(rng.uniform_below(7) < 7);
  }
  CHECK_THROWS_AS(rng.uniform_below(0), std::invalid_argument);
}

TEST_CASE("gaussian matches its first two moments") {
  RngStream rng(2024);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.gaussian(1.5, 2.0);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean - 1.5) < 0.02);
  CHECK(std::abs(var - 4.0) < 0.1);
}

TEST_CASE("shuffle produces a permutation, deterministically per seed") {
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  RngStream a(31), b(31);
  auto va = v, vb = v;
  a.shuffle(va);
  b.shuffle(vb);
  CHECK(va == vb);
  std::set<int> elems(va.begin(), va.end());
  CHECK(elems.size() == v.size());
}
