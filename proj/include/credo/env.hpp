#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace credo {

struct EnvDescriptor {
  int num_agents = 0;
  int num_actions = 0;
  int observation_space_size = 0;  // distinct encoded feature tuples
  int episode_length = 0;
};

/// Result of one simultaneous joint step.
struct JointStep {
  std::vector<int> obs;          // per-agent observation index
  std::vector<double> rewards;   // per-agent environmental reward
  std::vector<int> waste_removed;  // per-agent waste cells removed this step
  bool done = false;
};

class Env {
 public:
  virtual ~Env() = default;
  virtual EnvDescriptor descriptor() const = 0;
  /// Puts the environment into its initial state as a deterministic function
  /// of (configuration, seed); returns per-agent observations.
  virtual std::vector<int> reset(std::uint64_t seed) = 0;
  virtual JointStep step(std::span<const int> joint_actions) = 0;
};

}  // namespace credo
