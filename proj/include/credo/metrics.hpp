#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace credo {

/// Inverse Gini reading; in [0, 1] for non-negative rewards, 1 = full equality.
struct EqualityReading {
  double value = 1.0;
};

/// Equality = 1 - sum_i sum_j |R_i - R_j| / (2 N^2 Rbar).
///
/// Computed with the sorted O(N log N) identity; the brute-force double loop
/// lives in the tests as the independent oracle. The formula is undefined at
/// Rbar = 0: with the mean-zero convention enabled (default) an all-equal
/// population reads 1, otherwise that input is a domain error.
inline EqualityReading inverse_gini(std::span<const double> rewards,
                                    bool mean_zero_is_equal = true) {
  if (rewards.empty()) {
    throw std::invalid_argument("inverse_gini: empty reward vector");
  }
  const std::size_t n = rewards.size();
  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) /
                      static_cast<double>(n);
  if (mean == 0.0) {
    if (mean_zero_is_equal) return EqualityReading{1.0};
    throw std::domain_error("inverse_gini: undefined for zero-mean rewards");
  }
  std::vector<double> sorted(rewards.begin(), rewards.end());
  std::sort(sorted.begin(), sorted.end());
  // sum_i sum_j |x_i - x_j| = 2 * sum_k (2k - n + 1) x_(k), x sorted ascending
  double pairwise = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    pairwise += (2.0 * static_cast<double>(k) - static_cast<double>(n) + 1.0) * sorted[k];
  }
  pairwise *= 2.0;
  const double nn = static_cast<double>(n);
  return EqualityReading{1.0 - pairwise / (2.0 * nn * nn * mean)};
}

inline double mean_population_reward(std::span<const double> episode_totals) {
  if (episode_totals.empty()) {
    throw std::invalid_argument("mean_population_reward: empty input");
  }
  return std::accumulate(episode_totals.begin(), episode_totals.end(), 0.0) /
         static_cast<double>(episode_totals.size());
}

enum class Role { picker, cleaner, mixed };

inline const char* role_name(Role r) {
  switch (r) {
    case Role::picker: return "picker";
    case Role::cleaner: return "cleaner";
    default: return "mixed";
  }
}

/// Per-agent activity counts with the derived role labels.
struct RoleCensus {
  std::vector<std::int64_t> apple_count;
  std::vector<std::int64_t> clean_count;
  std::vector<Role> role;

  int count(Role r) const {
    return static_cast<int>(std::count(role.begin(), role.end(), r));
  }
};

/// picker  iff apples >= ratio * (cleans + 1)
/// cleaner iff cleans >= ratio * (apples + 1)
/// mixed otherwise. The +1 keeps an idle agent out of both specialist bins.
inline RoleCensus classify_roles(std::span<const std::int64_t> apples,
                                 std::span<const std::int64_t> cleans,
                                 double dominance_ratio = 3.0) {
  if (dominance_ratio <= 1.0) {
    throw std::invalid_argument("classify_roles: dominance_ratio must exceed 1, got " +
                                std::to_string(dominance_ratio));
  }
  if (apples.size() != cleans.size()) {
    throw std::invalid_argument("classify_roles: count vectors differ in length");
  }
  RoleCensus census;
  census.apple_count.assign(apples.begin(), apples.end());
  census.clean_count.assign(cleans.begin(), cleans.end());
  census.role.reserve(apples.size());
  for (std::size_t i = 0; i < apples.size(); ++i) {
    if (apples[i] < 0 || cleans[i] < 0) {
      throw std::invalid_argument("classify_roles: counts must be non-negative");
    }
    const double a = static_cast<double>(apples[i]);
    const double c = static_cast<double>(cleans[i]);
    if (a >= dominance_ratio * (c + 1.0)) {
      census.role.push_back(Role::picker);
    } else if (c >= dominance_ratio * (a + 1.0)) {
      census.role.push_back(Role::cleaner);
    } else {
      census.role.push_back(Role::mixed);
    }
  }
  return census;
}

/// Probability that at least one of n independent agents collects a non-zero
/// reward when each does so with probability p: 1 - (1 - p)^n.
inline double prob_any_nonzero(double p_collect, int n) {
  if (p_collect < 0.0 || p_collect > 1.0) {
    throw std::invalid_argument("prob_any_nonzero: p must be in [0, 1]");
  }
  if (n <= 0) throw std::invalid_argument("prob_any_nonzero: n must be positive");
  return 1.0 - std::pow(1.0 - p_collect, n);
}

/// Share each member of a fully reward-sharing group of size n receives.
inline double per_agent_share(double r, int n) {
  if (n <= 0) throw std::invalid_argument("per_agent_share: n must be positive");
  return r / static_cast<double>(n);
}

}  // namespace credo
