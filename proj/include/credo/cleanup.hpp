#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "credo/env.hpp"
#include "credo/rng.hpp"

namespace credo {

/// Movement/interaction actions. Apple consumption is automatic on entry;
/// clean removes waste from the agent's cell and its clean_reach
/// neighborhood and never yields environmental reward.
enum class CleanupAction : int { north = 0, south = 1, east = 2, west = 3, stay = 4, clean = 5 };
inline constexpr int kCleanupNumActions = 6;

enum class Zone : int { river = 0, open = 1, orchard = 2 };
inline constexpr int kNumZones = 3;

/// Direction to the nearest item of interest, from the observer's cell.
enum class ItemDir : int { none = 0, here = 1, north = 2, south = 3, east = 4, west = 5 };
inline constexpr int kNumItemDirs = 6;
inline constexpr int kNumPollutionBuckets = 5;

/// Compact egocentric observation: where the agent stands, how polluted the
/// river is, and where the nearest apple and waste are.
struct CleanupFeatures {
  Zone zone = Zone::open;
  int pollution_bucket = 0;  // floor(pollution * 5), clamped to 4
  ItemDir apple_dir = ItemDir::none;
  ItemDir waste_dir = ItemDir::none;

  bool operator==(const CleanupFeatures&) const = default;
};

inline int encode_observation(const CleanupFeatures& f) {
  return ((static_cast<int>(f.zone) * kNumPollutionBuckets + f.pollution_bucket) *
              kNumItemDirs +
          static_cast<int>(f.apple_dir)) *
             kNumItemDirs +
         static_cast<int>(f.waste_dir);
}

inline CleanupFeatures decode_observation(int index) {
  CleanupFeatures f;
  f.waste_dir = static_cast<ItemDir>(index % kNumItemDirs);
  index /= kNumItemDirs;
  f.apple_dir = static_cast<ItemDir>(index % kNumItemDirs);
  index /= kNumItemDirs;
  f.pollution_bucket = index % kNumPollutionBuckets;
  f.zone = static_cast<Zone>(index / kNumPollutionBuckets);
  return f;
}

inline constexpr int kCleanupObservationSpace =
    kNumZones * kNumPollutionBuckets * kNumItemDirs * kNumItemDirs;  // 540

struct CleanupConfig {
  int grid_width = 12;
  int grid_height = 9;
  int river_col_first = 0;   // inclusive
  int river_col_last = 1;    // inclusive
  int orchard_col_first = 9;
  int orchard_col_last = 11;
  double waste_spawn_prob = 0.05;      // per empty river cell per step
  double apple_spawn_max_prob = 0.05;  // per empty orchard cell per step, at clean river
  double threshold_depletion = 0.5;    // pollution at/above which no apples spawn
  double threshold_restoration = 0.0;  // pollution at/below which spawning is maximal
  double initial_pollution = 0.5;
  int sight_radius = 4;
  int clean_reach = 1;
  int episode_length = 200;

  void validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("env." + msg); };
    if (grid_width <= 0 || grid_height <= 0) fail("grid dimensions must be positive");
    if (river_col_first < 0 || river_col_last < river_col_first ||
        river_col_last >= grid_width)
      fail("river_columns out of range");
    if (orchard_col_first < 0 || orchard_col_last < orchard_col_first ||
        orchard_col_last >= grid_width)
      fail("orchard_columns out of range");
    if (river_col_last >= orchard_col_first && orchard_col_last >= river_col_first)
      fail("river_columns and orchard_columns must be disjoint");
    for (auto [name, p] : {std::pair<const char*, double>{"waste_spawn_prob", waste_spawn_prob},
                           {"apple_spawn_max_prob", apple_spawn_max_prob},
                           {"initial_pollution", initial_pollution}}) {
      if (p < 0.0 || p > 1.0) fail(std::string(name) + " must be in [0, 1]");
    }
    if (!(threshold_restoration >= 0.0 && threshold_restoration < threshold_depletion &&
          threshold_depletion <= 1.0))
      fail("thresholds must satisfy 0 <= restoration < depletion <= 1");
    if (sight_radius <= 0) fail("sight_radius must be positive");
    if (clean_reach < 0) fail("clean_reach must be non-negative");
    if (episode_length <= 0) fail("episode_length must be positive");
  }

  int num_river_cells() const { return (river_col_last - river_col_first + 1) * grid_height; }
  int num_orchard_cells() const {
    return (orchard_col_last - orchard_col_first + 1) * grid_height;
  }

  Zone zone_of_column(int col) const {
    if (col >= river_col_first && col <= river_col_last) return Zone::river;
    if (col >= orchard_col_first && col <= orchard_col_last) return Zone::orchard;
    return Zone::open;
  }
};

/// Scaled-down Cleanup: apples (+1 on entry) spawn in the orchard only while
/// river pollution stays below the depletion threshold, and pollution falls
/// only through unrewarded clean actions. Fully deterministic given
/// (config, seed, action sequence).
class CleanupEnv final : public Env {
 public:
  CleanupEnv(const CleanupConfig& cfg, int num_agents)
      : cfg_(cfg), num_agents_(num_agents), rng_(0) {
    cfg_.validate();
    if (num_agents_ <= 0) throw std::invalid_argument("CleanupEnv: num_agents must be positive");
    river_cells_ = cells_in_columns(cfg_.river_col_first, cfg_.river_col_last);
    orchard_cells_ = cells_in_columns(cfg_.orchard_col_first, cfg_.orchard_col_last);
    for (int r = 0; r < cfg_.grid_height; ++r) {
      for (int c = 0; c < cfg_.grid_width; ++c) {
        if (cfg_.zone_of_column(c) == Zone::open) open_cells_.push_back(cell_index(r, c));
      }
    }
    if (static_cast<int>(open_cells_.size()) < num_agents_) {
      throw std::invalid_argument(
          "CleanupEnv: open zone has " + std::to_string(open_cells_.size()) +
          " cells, cannot place " + std::to_string(num_agents_) + " agents");
    }
    waste_.assign(cell_count(), 0);
    apple_.assign(cell_count(), 0);
    occupied_.assign(cell_count(), 0);
    agent_row_.assign(static_cast<std::size_t>(num_agents_), 0);
    agent_col_.assign(static_cast<std::size_t>(num_agents_), 0);
  }

  EnvDescriptor descriptor() const override {
    return EnvDescriptor{num_agents_, kCleanupNumActions, kCleanupObservationSpace,
                         cfg_.episode_length};
  }

  std::vector<int> reset(std::uint64_t seed) override {
    rng_ = RngStream(seed);
    step_count_ = 0;
    std::fill(waste_.begin(), waste_.end(), 0);
    std::fill(apple_.begin(), apple_.end(), 0);
    std::fill(occupied_.begin(), occupied_.end(), 0);
    waste_count_ = 0;

    // Waste on a seed-determined subset of river cells; count from the
    // configured initial pollution fraction.
    std::vector<int> river = river_cells_;
    rng_.shuffle(river);
    const int n_waste = static_cast<int>(
        std::floor(cfg_.initial_pollution * static_cast<double>(river.size())));
    for (int i = 0; i < n_waste; ++i) {
      waste_[static_cast<std::size_t>(river[static_cast<std::size_t>(i)])] = 1;
    }
    waste_count_ = n_waste;

    // Agents on distinct cells of the open zone.
    std::vector<int> open = open_cells_;
    rng_.shuffle(open);
    for (int i = 0; i < num_agents_; ++i) {
      const int cell = open[static_cast<std::size_t>(i)];
      agent_row_[static_cast<std::size_t>(i)] = cell / cfg_.grid_width;
      agent_col_[static_cast<std::size_t>(i)] = cell % cfg_.grid_width;
      occupied_[static_cast<std::size_t>(cell)] = 1;
    }
    return observations();
  }

  JointStep step(std::span<const int> joint_actions) override {
    if (static_cast<int>(joint_actions.size()) != num_agents_) {
      throw std::invalid_argument("CleanupEnv::step: expected " +
                                  std::to_string(num_agents_) + " actions");
    }
    for (int a : joint_actions) {
      if (a < 0 || a >= kCleanupNumActions) {
        throw std::out_of_range("CleanupEnv::step: action index " + std::to_string(a));
      }
    }

    JointStep out;
    out.rewards.assign(static_cast<std::size_t>(num_agents_), 0.0);
    out.waste_removed.assign(static_cast<std::size_t>(num_agents_), 0);

    // 1. Simultaneous movement, resolved in a per-step random priority order;
    //    a move into a cell that is still occupied becomes stay.
    std::vector<int> priority(static_cast<std::size_t>(num_agents_));
    for (int i = 0; i < num_agents_; ++i) priority[static_cast<std::size_t>(i)] = i;
    rng_.shuffle(priority);
    for (int rank = 0; rank < num_agents_; ++rank) {
      const int i = priority[static_cast<std::size_t>(rank)];
      const auto action = static_cast<CleanupAction>(joint_actions[static_cast<std::size_t>(i)]);
      int dr = 0, dc = 0;
      switch (action) {
        case CleanupAction::north: dr = -1; break;
        case CleanupAction::south: dr = 1; break;
        case CleanupAction::east: dc = 1; break;
        case CleanupAction::west: dc = -1; break;
        default: continue;
      }
      const int r = agent_row_[static_cast<std::size_t>(i)] + dr;
      const int c = agent_col_[static_cast<std::size_t>(i)] + dc;
      if (r < 0 || r >= cfg_.grid_height || c < 0 || c >= cfg_.grid_width) continue;
      const int target = cell_index(r, c);
      if (occupied_[static_cast<std::size_t>(target)]) continue;
      occupied_[static_cast<std::size_t>(cell_index(agent_row_[static_cast<std::size_t>(i)],
                                                    agent_col_[static_cast<std::size_t>(i)]))] = 0;
      occupied_[static_cast<std::size_t>(target)] = 1;
      agent_row_[static_cast<std::size_t>(i)] = r;
      agent_col_[static_cast<std::size_t>(i)] = c;
    }

    // 2. Clean actions remove waste within clean_reach (Manhattan).
    for (int i = 0; i < num_agents_; ++i) {
      if (static_cast<CleanupAction>(joint_actions[static_cast<std::size_t>(i)]) !=
          CleanupAction::clean)
        continue;
      const int ar = agent_row_[static_cast<std::size_t>(i)];
      const int ac = agent_col_[static_cast<std::size_t>(i)];
      for (int dr = -cfg_.clean_reach; dr <= cfg_.clean_reach; ++dr) {
        const int budget = cfg_.clean_reach - std::abs(dr);
        for (int dc = -budget; dc <= budget; ++dc) {
          const int r = ar + dr, c = ac + dc;
          if (r < 0 || r >= cfg_.grid_height || c < 0 || c >= cfg_.grid_width) continue;
          auto& w = waste_[static_cast<std::size_t>(cell_index(r, c))];
          if (w) {
            w = 0;
            --waste_count_;
            ++out.waste_removed[static_cast<std::size_t>(i)];
          }
        }
      }
    }

    // 3. Apples under agents are consumed, +1 each.
    for (int i = 0; i < num_agents_; ++i) {
      auto& ap = apple_[static_cast<std::size_t>(cell_index(
          agent_row_[static_cast<std::size_t>(i)], agent_col_[static_cast<std::size_t>(i)]))];
      if (ap) {
        ap = 0;
        out.rewards[static_cast<std::size_t>(i)] = 1.0;
      }
    }

    // 4. Waste spawns in empty river cells.
    for (int cell : river_cells_) {
      if (!waste_[static_cast<std::size_t>(cell)] && rng_.bernoulli(cfg_.waste_spawn_prob)) {
        waste_[static_cast<std::size_t>(cell)] = 1;
        ++waste_count_;
      }
    }

    // 5. Apples spawn in empty, unoccupied orchard cells at a rate scaled by
    //    current cleanliness, so consumption happens only on entry.
    const double rate = cfg_.apple_spawn_max_prob * spawn_factor(pollution());
    for (int cell : orchard_cells_) {
      if (apple_[static_cast<std::size_t>(cell)] || occupied_[static_cast<std::size_t>(cell)])
        continue;
      if (rate > 0.0 && rng_.bernoulli(rate)) apple_[static_cast<std::size_t>(cell)] = 1;
    }

    ++step_count_;
    out.done = step_count_ >= cfg_.episode_length;
    out.obs = observations();
    return out;
  }

  /// Fraction of river cells currently carrying waste.
  double pollution() const {
    return static_cast<double>(waste_count_) / static_cast<double>(cfg_.num_river_cells());
  }

  CleanupFeatures observe_features(int agent_id) const {
    check_agent(agent_id);
    CleanupFeatures f;
    f.zone = cfg_.zone_of_column(agent_col_[static_cast<std::size_t>(agent_id)]);
    f.pollution_bucket = std::min(kNumPollutionBuckets - 1,
                                  static_cast<int>(std::floor(pollution() * kNumPollutionBuckets)));
    f.apple_dir = nearest_dir(agent_id, apple_);
    f.waste_dir = nearest_dir(agent_id, waste_);
    return f;
  }

  // Scenario construction hooks; used by tests and debugging tools.
  void place_agent(int agent_id, int row, int col) {
    check_agent(agent_id);
    check_cell(row, col);
    const int target = cell_index(row, col);
    if (occupied_[static_cast<std::size_t>(target)]) {
      throw std::invalid_argument("place_agent: cell already occupied");
    }
    occupied_[static_cast<std::size_t>(cell_index(
        agent_row_[static_cast<std::size_t>(agent_id)],
        agent_col_[static_cast<std::size_t>(agent_id)]))] = 0;
    occupied_[static_cast<std::size_t>(target)] = 1;
    agent_row_[static_cast<std::size_t>(agent_id)] = row;
    agent_col_[static_cast<std::size_t>(agent_id)] = col;
  }

  void put_apple(int row, int col) {
    check_cell(row, col);
    if (cfg_.zone_of_column(col) != Zone::orchard) {
      throw std::invalid_argument("put_apple: not an orchard cell");
    }
    apple_[static_cast<std::size_t>(cell_index(row, col))] = 1;
  }

  void put_waste(int row, int col) {
    check_cell(row, col);
    if (cfg_.zone_of_column(col) != Zone::river) {
      throw std::invalid_argument("put_waste: not a river cell");
    }
    auto& w = waste_[static_cast<std::size_t>(cell_index(row, col))];
    if (!w) {
      w = 1;
      ++waste_count_;
    }
  }

  void clear_waste() {
    std::fill(waste_.begin(), waste_.end(), 0);
    waste_count_ = 0;
  }

  bool has_apple(int row, int col) const {
    check_cell(row, col);
    return apple_[static_cast<std::size_t>(cell_index(row, col))] != 0;
  }
  bool has_waste(int row, int col) const {
    check_cell(row, col);
    return waste_[static_cast<std::size_t>(cell_index(row, col))] != 0;
  }
  int apple_count() const {
    return static_cast<int>(std::count(apple_.begin(), apple_.end(), 1));
  }
  int waste_count() const { return waste_count_; }
  std::pair<int, int> agent_position(int agent_id) const {
    check_agent(agent_id);
    return {agent_row_[static_cast<std::size_t>(agent_id)],
            agent_col_[static_cast<std::size_t>(agent_id)]};
  }
  const CleanupConfig& config() const { return cfg_; }

 private:
  int cell_count() const { return cfg_.grid_width * cfg_.grid_height; }
  int cell_index(int row, int col) const { return row * cfg_.grid_width + col; }

  void check_agent(int agent_id) const {
    if (agent_id < 0 || agent_id >= num_agents_) {
      throw std::out_of_range("CleanupEnv: agent id " + std::to_string(agent_id));
    }
  }
  void check_cell(int row, int col) const {
    if (row < 0 || row >= cfg_.grid_height || col < 0 || col >= cfg_.grid_width) {
      throw std::out_of_range("CleanupEnv: cell (" + std::to_string(row) + ", " +
                              std::to_string(col) + ") outside grid");
    }
  }

  std::vector<int> cells_in_columns(int first, int last) const {
    std::vector<int> cells;
    cells.reserve(static_cast<std::size_t>((last - first + 1) * cfg_.grid_height));
    for (int r = 0; r < cfg_.grid_height; ++r) {
      for (int c = first; c <= last; ++c) cells.push_back(cell_index(r, c));
    }
    return cells;
  }

  double spawn_factor(double pollution_level) const {
    if (pollution_level <= cfg_.threshold_restoration) return 1.0;
    if (pollution_level >= cfg_.threshold_depletion) return 0.0;
    return (cfg_.threshold_depletion - pollution_level) /
           (cfg_.threshold_depletion - cfg_.threshold_restoration);
  }

  /// Direction to the nearest set cell within sight_radius (Manhattan).
  /// Diagonal displacements admit both axis directions; all candidates from
  /// all nearest cells compete under the fixed priority N > S > E > W.
  ItemDir nearest_dir(int agent_id, const std::vector<std::uint8_t>& grid) const {
    const int ar = agent_row_[static_cast<std::size_t>(agent_id)];
    const int ac = agent_col_[static_cast<std::size_t>(agent_id)];
    if (grid[static_cast<std::size_t>(cell_index(ar, ac))]) return ItemDir::here;
    int best_dist = cfg_.sight_radius + 1;
    bool n = false, s = false, e = false, w = false;
    for (int dr = -cfg_.sight_radius; dr <= cfg_.sight_radius; ++dr) {
      const int r = ar + dr;
      if (r < 0 || r >= cfg_.grid_height) continue;
      const int budget = cfg_.sight_radius - std::abs(dr);
      for (int dc = -budget; dc <= budget; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const int c = ac + dc;
        if (c < 0 || c >= cfg_.grid_width) continue;
        if (!grid[static_cast<std::size_t>(cell_index(r, c))]) continue;
        const int dist = std::abs(dr) + std::abs(dc);
        if (dist > best_dist) continue;
        if (dist < best_dist) {
          best_dist = dist;
          n = s = e = w = false;
        }
        if (dr < 0) n = true;
        if (dr > 0) s = true;
        if (dc > 0) e = true;
        if (dc < 0) w = true;
      }
    }
    if (best_dist > cfg_.sight_radius) return ItemDir::none;
    if (n) return ItemDir::north;
    if (s) return ItemDir::south;
    if (e) return ItemDir::east;
    return ItemDir::west;
  }

  std::vector<int> observations() const {
    std::vector<int> obs(static_cast<std::size_t>(num_agents_));
    for (int i = 0; i < num_agents_; ++i) {
      obs[static_cast<std::size_t>(i)] = encode_observation(observe_features(i));
    }
    return obs;
  }

  CleanupConfig cfg_;
  int num_agents_;
  RngStream rng_;
  std::vector<int> river_cells_;
  std::vector<int> orchard_cells_;
  std::vector<int> open_cells_;
  int step_count_ = 0;
  int waste_count_ = 0;
  std::vector<std::uint8_t> waste_;
  std::vector<std::uint8_t> apple_;
  std::vector<std::uint8_t> occupied_;
  std::vector<int> agent_row_;
  std::vector<int> agent_col_;
};

}  // namespace credo
