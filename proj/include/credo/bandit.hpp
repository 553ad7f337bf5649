#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "credo/env.hpp"
#include "credo/lattice.hpp"
#include "credo/rng.hpp"

namespace credo {

/// Synthetic batch reward for the credo-tuning layer: highest in expectation
/// exactly when the current lattice point sits on the target.
///   reward = (1 - L1(current, target) / 2) + N(0, noise_sigma)
inline double bandit_batch_reward(const CredoLatticePoint& target,
                                  const CredoLatticePoint& current, double noise_sigma,
                                  RngStream& rng) {
  if (target.denominator != current.denominator) {
    throw std::invalid_argument("bandit_batch_reward: lattice resolutions differ");
  }
  int l1_steps = 0;
  for (int c = 0; c < 3; ++c) {
    l1_steps += std::abs(current.steps[static_cast<std::size_t>(c)] -
                         target.steps[static_cast<std::size_t>(c)]);
  }
  const double l1 = static_cast<double>(l1_steps) / static_cast<double>(target.denominator);
  const double base = 1.0 - l1 / 2.0;
  if (noise_sigma == 0.0) return base;
  return base + rng.gaussian(0.0, noise_sigma);
}

/// Noise-free expected value of the bandit reward; the value-iteration
/// oracle in the tests is built on this.
inline double bandit_expected_reward(const CredoLatticePoint& target,
                                     const CredoLatticePoint& current) {
  RngStream unused(0);
  return bandit_batch_reward(target, current, 0.0, unused);
}

struct BanditConfig {
  CredoLatticePoint target{{4, 1, 0}, 5};  // <0.8, 0.2, 0.0>
  double noise_sigma = 0.05;
  int episode_length = 1;

  void validate() const {
    if (noise_sigma < 0.0) throw std::invalid_argument("env.noise_sigma must be >= 0");
    if (episode_length <= 0) throw std::invalid_argument("env.episode_length must be positive");
    int total = 0;
    for (int s : target.steps) {
      if (s < 0) throw std::invalid_argument("env.target has a negative component");
      total += s;
    }
    if (total != target.denominator) {
      throw std::invalid_argument("env.target does not lie on the credo lattice");
    }
  }
};

/// Stateless environment wrapper for harness runs against the synthetic
/// oracle: constant observation 0, no actions of consequence, zero per-step
/// rewards. The per-agent batch reward is produced directly from each
/// agent's lattice point by the harness.
class CredoResponseBandit final : public Env {
 public:
  CredoResponseBandit(const BanditConfig& cfg, int num_agents)
      : cfg_(cfg), num_agents_(num_agents) {
    cfg_.validate();
    if (num_agents_ <= 0) {
      throw std::invalid_argument("CredoResponseBandit: num_agents must be positive");
    }
  }

  EnvDescriptor descriptor() const override {
    return EnvDescriptor{num_agents_, 1, 1, cfg_.episode_length};
  }

  std::vector<int> reset(std::uint64_t) override {
    step_count_ = 0;
    return std::vector<int>(static_cast<std::size_t>(num_agents_), 0);
  }

  JointStep step(std::span<const int> joint_actions) override {
    if (static_cast<int>(joint_actions.size()) != num_agents_) {
      throw std::invalid_argument("CredoResponseBandit::step: wrong action count");
    }
    for (int a : joint_actions) {
      if (a != 0) throw std::out_of_range("CredoResponseBandit::step: invalid action");
    }
    JointStep out;
    out.obs.assign(static_cast<std::size_t>(num_agents_), 0);
    out.rewards.assign(static_cast<std::size_t>(num_agents_), 0.0);
    out.waste_removed.assign(static_cast<std::size_t>(num_agents_), 0);
    out.done = ++step_count_ >= cfg_.episode_length;
    return out;
  }

  const BanditConfig& config() const { return cfg_; }

 private:
  BanditConfig cfg_;
  int num_agents_;
  int step_count_ = 0;
};

}  // namespace credo
