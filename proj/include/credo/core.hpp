#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace credo {

inline constexpr double kSimplexTol = 1e-9;

/// An agent's group-alignment weights over its own reward, its team's pot,
/// and the system pot. Must lie on the unit simplex.
struct CredoVector {
  double self_weight = 1.0;    // psi
  double team_weight = 0.0;    // phi
  double system_weight = 0.0;  // omega

  double sum() const { return self_weight + team_weight + system_weight; }

  bool operator==(const CredoVector&) const = default;
};

/// Total check of the simplex invariants. Returns std::nullopt when valid,
/// otherwise a description naming the offending component and magnitude.
inline std::optional<std::string> validate_credo(const CredoVector& cr) {
  auto describe = [](const char* name, double v) {
    std::ostringstream os;
    os << name << " = " << v << " outside [0, 1]";
    return os.str();
  };
  if (cr.self_weight < 0.0 || cr.self_weight > 1.0)
    return describe("self_weight", cr.self_weight);
  if (cr.team_weight < 0.0 || cr.team_weight > 1.0)
    return describe("team_weight", cr.team_weight);
  if (cr.system_weight < 0.0 || cr.system_weight > 1.0)
    return describe("system_weight", cr.system_weight);
  const double s = cr.sum();
  if (std::abs(s - 1.0) > kSimplexTol) {
    std::ostringstream os;
    os << "credo sum = " << s << " (must be 1 within " << kSimplexTol << ")";
    return os.str();
  }
  return std::nullopt;
}

/// Validates and returns, or throws std::invalid_argument. Out-of-tolerance
/// inputs are rejected rather than renormalized.
inline CredoVector make_credo(double self_w, double team_w, double system_w) {
  CredoVector cr{self_w, team_w, system_w};
  if (auto violation = validate_credo(cr)) {
    throw std::invalid_argument("invalid credo: " + *violation);
  }
  return cr;
}

/// Partition of agent ids {0..N-1} into disjoint, non-empty teams. Every
/// agent belongs to exactly one team; team indices are stable.
class TeamStructure {
 public:
  TeamStructure(int num_agents, std::vector<std::vector<int>> teams)
      : num_agents_(num_agents), teams_(std::move(teams)) {
    if (num_agents_ <= 0) {
      throw std::invalid_argument("TeamStructure: num_agents must be positive");
    }
    team_of_.assign(static_cast<std::size_t>(num_agents_), -1);
    for (std::size_t t = 0; t < teams_.size(); ++t) {
      if (teams_[t].empty()) {
        throw std::invalid_argument("TeamStructure: team " + std::to_string(t) +
                                    " is empty");
      }
      for (int id : teams_[t]) {
        if (id < 0 || id >= num_agents_) {
          throw std::invalid_argument("TeamStructure: agent id " + std::to_string(id) +
                                      " out of range for N=" + std::to_string(num_agents_));
        }
        if (team_of_[static_cast<std::size_t>(id)] != -1) {
          throw std::invalid_argument("TeamStructure: agent " + std::to_string(id) +
                                      " appears in more than one team");
        }
        team_of_[static_cast<std::size_t>(id)] = static_cast<int>(t);
      }
    }
    for (int i = 0; i < num_agents_; ++i) {
      if (team_of_[static_cast<std::size_t>(i)] == -1) {
        throw std::invalid_argument("TeamStructure: agent " + std::to_string(i) +
                                    " belongs to no team");
      }
    }
  }

  /// Consecutive id blocks: {0..k-1}, {k..2k-1}, ... Requires N % k == 0.
  static TeamStructure blocks(int num_agents, int team_size) {
    if (team_size <= 0 || num_agents % team_size != 0) {
      throw std::invalid_argument(
          "TeamStructure::blocks: num_agents (" + std::to_string(num_agents) +
          ") must be divisible by team_size (" + std::to_string(team_size) + ")");
    }
    std::vector<std::vector<int>> teams;
    for (int start = 0; start < num_agents; start += team_size) {
      std::vector<int> team;
      for (int i = 0; i < team_size; ++i) team.push_back(start + i);
      teams.push_back(std::move(team));
    }
    return TeamStructure(num_agents, std::move(teams));
  }

  int num_agents() const { return num_agents_; }
  int num_teams() const { return static_cast<int>(teams_.size()); }
  const std::vector<std::vector<int>>& teams() const { return teams_; }
  int team_of(int agent_id) const { return team_of_.at(static_cast<std::size_t>(agent_id)); }
  const std::vector<int>& team_members(int team_index) const {
    return teams_.at(static_cast<std::size_t>(team_index));
  }

 private:
  int num_agents_;
  std::vector<std::vector<int>> teams_;
  std::vector<int> team_of_;
};

/// One timestep's environmental rewards next to their credo-based
/// counterparts. Conservation ties the two sums together.
struct RewardLedger {
  std::vector<double> step_env_rewards;
  std::vector<double> step_credo_rewards;
};

/// Team pot: sum over members of phi_j * R_j.
inline double team_pot(std::span<const int> team, std::span<const CredoVector> credos,
                       std::span<const double> env_rewards) {
  if (credos.size() != env_rewards.size()) {
    throw std::invalid_argument("team_pot: credos and rewards length mismatch");
  }
  double pot = 0.0;
  for (int id : team) {
    if (id < 0 || static_cast<std::size_t>(id) >= credos.size()) {
      throw std::out_of_range("team_pot: unknown agent id " + std::to_string(id));
    }
    pot += credos[static_cast<std::size_t>(id)].team_weight *
           env_rewards[static_cast<std::size_t>(id)];
  }
  return pot;
}

/// System pot: sum over all agents of omega_j * R_j.
inline double system_pot(std::span<const CredoVector> credos,
                         std::span<const double> env_rewards) {
  if (credos.size() != env_rewards.size()) {
    throw std::invalid_argument("system_pot: credos and rewards length mismatch");
  }
  double pot = 0.0;
  for (std::size_t j = 0; j < credos.size(); ++j) {
    pot += credos[j].system_weight * env_rewards[j];
  }
  return pot;
}

/// Credo-based reward for every agent:
///   R_i^cr = psi_i * R_i
///          + (phi_i / sum_{j in T_i} phi_j) * team_pot(T_i)
///          + (omega_i / sum_j omega_j)      * system_pot.
/// A channel whose weight sum is zero contributes zero to every member (its
/// pot is zero as well, so the total stays conserved).
inline std::vector<double> redistribute(const TeamStructure& structure,
                                        std::span<const CredoVector> credos,
                                        std::span<const double> env_rewards) {
  const std::size_t n = static_cast<std::size_t>(structure.num_agents());
  if (credos.size() != n || env_rewards.size() != n) {
    throw std::invalid_argument("redistribute: expected " + std::to_string(n) +
                                " credos and rewards");
  }

  double omega_sum = 0.0;
  for (const auto& cr : credos) omega_sum += cr.system_weight;
  const double sys_pot = system_pot(credos, env_rewards);
  const double sys_unit = omega_sum > 0.0 ? sys_pot / omega_sum : 0.0;

  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = credos[i].self_weight * env_rewards[i] +
             credos[i].system_weight * sys_unit;
  }
  for (const auto& team : structure.teams()) {
    double phi_sum = 0.0;
    for (int id : team) phi_sum += credos[static_cast<std::size_t>(id)].team_weight;
    if (phi_sum <= 0.0) continue;
    const double unit = team_pot(team, credos, env_rewards) / phi_sum;
    for (int id : team) {
      out[static_cast<std::size_t>(id)] +=
          credos[static_cast<std::size_t>(id)].team_weight * unit;
    }
  }
  return out;
}

}  // namespace credo
