#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "credo/lattice.hpp"
#include "credo/rng.hpp"

namespace credo {

struct CredoPolicyConfig {
  double epsilon = 0.2;  // fixed, no decay
  double alpha = 0.1;
  double gamma = 0.9;
  double resolution = 0.2;

  void validate() const {
    if (epsilon < 0.0 || epsilon > 1.0)
      throw std::invalid_argument("credo_policy.epsilon must be in [0, 1]");
    if (alpha <= 0.0 || alpha > 1.0)
      throw std::invalid_argument("credo_policy.alpha must be in (0, 1]");
    if (gamma < 0.0 || gamma >= 1.0)
      throw std::invalid_argument("credo_policy.gamma must be in [0, 1)");
    lattice_denominator(resolution);  // throws unless 1/resolution is integral
  }
};

/// High-level credo-tuning policy: a tabular Q-learner over the discretized
/// credo simplex (21 states at resolution 0.2) with the seven transfer moves.
/// Updated once per batch of E episodes with the batch reward R̄.
class CredoPolicy {
 public:
  explicit CredoPolicy(const CredoPolicyConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    denominator_ = lattice_denominator(cfg_.resolution);
    num_states_ = lattice_size(denominator_);
    q_.assign(static_cast<std::size_t>(num_states_) * kNumCredoMoves, 0.0);
  }

  /// Epsilon-greedy over the seven moves; greedy ties break toward the
  /// lowest move index (no_op is index 0).
  CredoMove select(const CredoLatticePoint& state, RngStream& rng) const {
    const int s = state_index(state);
    if (cfg_.epsilon > 0.0 && rng.uniform() < cfg_.epsilon) {
      return credo_moves()[rng.uniform_below(kNumCredoMoves)];
    }
    return credo_moves()[static_cast<std::size_t>(greedy_move_index(s))];
  }

  CredoMove greedy_move(const CredoLatticePoint& state) const {
    return credo_moves()[static_cast<std::size_t>(greedy_move_index(state_index(state)))];
  }

  /// Q[s,m] += alpha * (Rbar + gamma * max_m' Q[s',m'] - Q[s,m]), where s' is
  /// the point the move led to and Rbar is the batch reward observed there.
  void update(const CredoLatticePoint& state, const CredoMove& move, double batch_reward,
              const CredoLatticePoint& next_state) {
    const int s = state_index(state);
    const int s2 = state_index(next_state);
    const int m = move_index(move);
    double best_next = q_[static_cast<std::size_t>(s2) * kNumCredoMoves];
    for (int j = 1; j < kNumCredoMoves; ++j) {
      best_next = std::max(best_next, q_[static_cast<std::size_t>(s2) * kNumCredoMoves +
                                         static_cast<std::size_t>(j)]);
    }
    double& cell =
        q_[static_cast<std::size_t>(s) * kNumCredoMoves + static_cast<std::size_t>(m)];
    cell += cfg_.alpha * (batch_reward + cfg_.gamma * best_next - cell);
  }

  double q(const CredoLatticePoint& state, const CredoMove& move) const {
    return q_[static_cast<std::size_t>(state_index(state)) * kNumCredoMoves +
              static_cast<std::size_t>(move_index(move))];
  }

  static int move_index(const CredoMove& move) {
    const auto& moves = credo_moves();
    for (int i = 0; i < kNumCredoMoves; ++i) {
      if (moves[static_cast<std::size_t>(i)] == move) return i;
    }
    throw std::invalid_argument("CredoPolicy: unknown move " + move_name(move));
  }

  int num_states() const { return num_states_; }
  int denominator() const { return denominator_; }
  const std::vector<double>& table() const { return q_; }
  const CredoPolicyConfig& config() const { return cfg_; }

 private:
  int state_index(const CredoLatticePoint& p) const {
    if (p.denominator != denominator_) {
      throw std::invalid_argument("CredoPolicy: point resolution 1/" +
                                  std::to_string(p.denominator) +
                                  " does not match policy resolution 1/" +
                                  std::to_string(denominator_));
    }
    return lattice_index(p);
  }

  int greedy_move_index(int s) const {
    const double* row = &q_[static_cast<std::size_t>(s) * kNumCredoMoves];
    int best = 0;
    for (int m = 1; m < kNumCredoMoves; ++m) {
      if (row[m] > row[best]) best = m;
    }
    return best;
  }

  CredoPolicyConfig cfg_;
  int denominator_ = 5;
  int num_states_ = 21;
  std::vector<double> q_;
};

}  // namespace credo
