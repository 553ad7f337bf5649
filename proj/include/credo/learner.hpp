#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "credo/rng.hpp"

namespace credo {

struct LearnerConfig {
  double alpha = 0.1;
  double gamma = 0.99;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  std::int64_t epsilon_decay_steps = 100000;

  void validate() const {
    if (alpha <= 0.0 || alpha > 1.0)
      throw std::invalid_argument("learner.alpha must be in (0, 1]");
    if (gamma < 0.0 || gamma >= 1.0)
      throw std::invalid_argument("learner.gamma must be in [0, 1)");
    if (epsilon_start < 0.0 || epsilon_start > 1.0)
      throw std::invalid_argument("learner.epsilon_start must be in [0, 1]");
    if (epsilon_end < 0.0 || epsilon_end > epsilon_start)
      throw std::invalid_argument("learner.epsilon_end must be in [0, epsilon_start]");
    if (epsilon_decay_steps <= 0)
      throw std::invalid_argument("learner.epsilon_decay_steps must be positive");
  }
};

struct Transition {
  int obs = 0;
  int action = 0;
  double credo_reward = 0.0;
  int next_obs = 0;
  bool terminal = false;
};

/// Independent tabular Q-learner trained on credo-shaped rewards. Tables are
/// zero-initialized; epsilon decays linearly over the first
/// epsilon_decay_steps action selections.
class QLearner {
 public:
  QLearner(int num_obs, int num_actions, const LearnerConfig& cfg)
      : num_obs_(num_obs), num_actions_(num_actions), cfg_(cfg) {
    cfg_.validate();
    if (num_obs <= 0 || num_actions <= 0) {
      throw std::invalid_argument("QLearner: observation and action counts must be positive");
    }
    q_.assign(static_cast<std::size_t>(num_obs) * static_cast<std::size_t>(num_actions), 0.0);
  }

  double epsilon() const {
    const double t = std::min<double>(static_cast<double>(steps_taken_),
                                      static_cast<double>(cfg_.epsilon_decay_steps));
    const double frac = t / static_cast<double>(cfg_.epsilon_decay_steps);
    return cfg_.epsilon_start + (cfg_.epsilon_end - cfg_.epsilon_start) * frac;
  }

  /// Epsilon-greedy over the observation's Q row; greedy ties break toward
  /// the lowest action index. Advances the epsilon schedule by one step.
  int select_action(int obs, RngStream& rng) {
    check_obs(obs);
    const double eps = epsilon();
    ++steps_taken_;
    if (eps > 0.0 && rng.uniform() < eps) {
      return static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(num_actions_)));
    }
    return greedy_action(obs);
  }

  int greedy_action(int obs) const {
    check_obs(obs);
    const double* row = &q_[static_cast<std::size_t>(obs) * static_cast<std::size_t>(num_actions_)];
    int best = 0;
    for (int a = 1; a < num_actions_; ++a) {
      if (row[a] > row[best]) best = a;
    }
    return best;
  }

  /// One-step Q-learning target:
  ///   Q[s,a] += alpha * (r + gamma * max_a' Q[s',a'] * (1 - terminal) - Q[s,a])
  void update(const Transition& t) {
    check_obs(t.obs);
    check_obs(t.next_obs);
    if (t.action < 0 || t.action >= num_actions_) {
      throw std::out_of_range("QLearner::update: action " + std::to_string(t.action));
    }
    double target = t.credo_reward;
    if (!t.terminal) {
      target += cfg_.gamma * max_q(t.next_obs);
    }
    double& cell = q_[static_cast<std::size_t>(t.obs) * static_cast<std::size_t>(num_actions_) +
                      static_cast<std::size_t>(t.action)];
    cell += cfg_.alpha * (target - cell);
  }

  double max_q(int obs) const {
    const double* row = &q_[static_cast<std::size_t>(obs) * static_cast<std::size_t>(num_actions_)];
    return *std::max_element(row, row + num_actions_);
  }

  double q(int obs, int action) const {
    return q_[static_cast<std::size_t>(obs) * static_cast<std::size_t>(num_actions_) +
              static_cast<std::size_t>(action)];
  }

  int num_obs() const { return num_obs_; }
  int num_actions() const { return num_actions_; }
  std::int64_t steps_taken() const { return steps_taken_; }
  const std::vector<double>& table() const { return q_; }
  const LearnerConfig& config() const { return cfg_; }

 private:
  void check_obs(int obs) const {
    if (obs < 0 || obs >= num_obs_) {
      throw std::out_of_range("QLearner: observation index " + std::to_string(obs) +
                              " outside [0, " + std::to_string(num_obs_) + ")");
    }
  }

  int num_obs_;
  int num_actions_;
  LearnerConfig cfg_;
  std::vector<double> q_;
  std::int64_t steps_taken_ = 0;
};

}  // namespace credo
