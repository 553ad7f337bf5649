#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "credo/bandit.hpp"
#include "credo/cleanup.hpp"
#include "credo/core.hpp"
#include "credo/credo_policy.hpp"
#include "credo/learner.hpp"

namespace credo {

using json = nlohmann::json;

/// Error carrying the offending config field, for field-level diagnostics.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class CredoMode { static_credo, tuning };

/// Where the high-level batch reward comes from: the credo-shaped reward the
/// behavioral learner actually trained on (default), or the raw
/// environmental reward.
enum class BatchRewardSource { credo, env };

struct ExperimentConfig {
  std::variant<CleanupConfig, BanditConfig> env;
  int num_agents = 6;
  int team_size = 2;
  CredoMode credo_mode = CredoMode::static_credo;
  std::vector<CredoVector> initial_credos;  // size 1 (broadcast) or num_agents
  int episodes_per_batch = 4;  // E
  int total_batches = 300;
  LearnerConfig learner;
  CredoPolicyConfig credo_policy;
  BatchRewardSource batch_reward_source = BatchRewardSource::credo;
  bool normalize_batch_reward = false;  // divide Rbar by episode_length
  int trials = 4;
  std::uint64_t master_seed = 0;

  bool is_bandit() const { return std::holds_alternative<BanditConfig>(env); }
  int episode_length() const {
    return is_bandit() ? std::get<BanditConfig>(env).episode_length
                       : std::get<CleanupConfig>(env).episode_length;
  }

  std::vector<CredoVector> credos_per_agent() const {
    if (initial_credos.size() == 1) {
      return std::vector<CredoVector>(static_cast<std::size_t>(num_agents),
                                      initial_credos.front());
    }
    return initial_credos;
  }

  void validate() const {
    if (num_agents <= 0) throw ConfigError("num_agents must be positive");
    if (team_size <= 0 || num_agents % team_size != 0) {
      throw ConfigError("num_agents (" + std::to_string(num_agents) +
                        ") must be divisible by team_size (" + std::to_string(team_size) + ")");
    }
    if (initial_credos.empty()) throw ConfigError("initial_credos must not be empty");
    if (initial_credos.size() != 1 &&
        initial_credos.size() != static_cast<std::size_t>(num_agents)) {
      throw ConfigError("initial_credos must hold 1 or num_agents entries, got " +
                        std::to_string(initial_credos.size()));
    }
    for (std::size_t i = 0; i < initial_credos.size(); ++i) {
      if (auto violation = validate_credo(initial_credos[i])) {
        throw ConfigError("initial_credos[" + std::to_string(i) + "]: " + *violation);
      }
    }
    if (episodes_per_batch < 1) throw ConfigError("episodes_per_batch must be >= 1");
    if (total_batches < 1) throw ConfigError("total_batches must be >= 1");
    if (trials < 1) throw ConfigError("trials must be >= 1");
    try {
      learner.validate();
      credo_policy.validate();
      std::visit([](const auto& e) { e.validate(); }, env);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (credo_mode == CredoMode::tuning) {
      // Tuned credos must start on the lattice the high-level policy walks.
      for (std::size_t i = 0; i < initial_credos.size(); ++i) {
        try {
          lattice_point_from_credo(initial_credos[i], credo_policy.resolution);
        } catch (const std::invalid_argument& e) {
          throw ConfigError("initial_credos[" + std::to_string(i) +
                            "] (tuning mode): " + e.what());
        }
      }
    }
  }
};

namespace detail {

/// Strict object reader: every key must be consumed exactly once, anything
/// left over is a config error naming the key.
class StrictObject {
 public:
  StrictObject(const json& j, std::string path) : path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_ + ": expected an object");
    for (const auto& [key, value] : j.items()) remaining_.emplace_back(key, &value);
  }

  const json* take(const std::string& key) {
    for (auto it = remaining_.begin(); it != remaining_.end(); ++it) {
      if (it->first == key) {
        const json* v = it->second;
        remaining_.erase(it);
        return v;
      }
    }
    return nullptr;
  }

  void finish() const {
    if (!remaining_.empty()) {
      throw ConfigError("unknown key '" + qualified(remaining_.front().first) + "'");
    }
  }

  std::string qualified(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  std::string path_;
  std::vector<std::pair<std::string, const json*>> remaining_;
};

template <typename T>
T get_as(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + ": unexpected value type");
  }
}

template <typename T>
void read_field(StrictObject& obj, const std::string& key, T& out) {
  if (const json* v = obj.take(key)) out = get_as<T>(*v, obj.qualified(key));
}

inline CredoVector parse_credo(const json& j, const std::string& path) {
  const auto values = get_as<std::vector<double>>(j, path);
  if (values.size() != 3) {
    throw ConfigError(path + ": a credo is [self, team, system]");
  }
  CredoVector cr{values[0], values[1], values[2]};
  if (auto violation = validate_credo(cr)) throw ConfigError(path + ": " + *violation);
  return cr;
}

inline std::variant<CleanupConfig, BanditConfig> parse_env(const json& j) {
  StrictObject obj(j, "env");
  std::string type = "cleanup";
  read_field(obj, "type", type);
  if (type == "cleanup") {
    CleanupConfig cfg;
    read_field(obj, "grid_width", cfg.grid_width);
    read_field(obj, "grid_height", cfg.grid_height);
    if (const json* v = obj.take("river_columns")) {
      auto range = get_as<std::vector<int>>(*v, "env.river_columns");
      if (range.size() != 2) throw ConfigError("env.river_columns: expected [first, last]");
      cfg.river_col_first = range[0];
      cfg.river_col_last = range[1];
    }
    if (const json* v = obj.take("orchard_columns")) {
      auto range = get_as<std::vector<int>>(*v, "env.orchard_columns");
      if (range.size() != 2) throw ConfigError("env.orchard_columns: expected [first, last]");
      cfg.orchard_col_first = range[0];
      cfg.orchard_col_last = range[1];
    }
    read_field(obj, "waste_spawn_prob", cfg.waste_spawn_prob);
    read_field(obj, "apple_spawn_max_prob", cfg.apple_spawn_max_prob);
    read_field(obj, "threshold_depletion", cfg.threshold_depletion);
    read_field(obj, "threshold_restoration", cfg.threshold_restoration);
    read_field(obj, "initial_pollution", cfg.initial_pollution);
    read_field(obj, "sight_radius", cfg.sight_radius);
    read_field(obj, "clean_reach", cfg.clean_reach);
    read_field(obj, "episode_length", cfg.episode_length);
    obj.finish();
    return cfg;
  }
  if (type == "bandit") {
    BanditConfig cfg;
    double resolution = 0.2;
    read_field(obj, "resolution", resolution);
    if (const json* v = obj.take("target")) {
      const CredoVector cr = parse_credo(*v, "env.target");
      try {
        cfg.target = lattice_point_from_credo(cr, resolution);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("env.target: ") + e.what());
      }
    }
    read_field(obj, "noise_sigma", cfg.noise_sigma);
    read_field(obj, "episode_length", cfg.episode_length);
    obj.finish();
    return cfg;
  }
  throw ConfigError("env.type: unknown environment '" + type + "' (cleanup | bandit)");
}

inline LearnerConfig parse_learner(const json& j) {
  StrictObject obj(j, "learner");
  LearnerConfig cfg;
  read_field(obj, "alpha", cfg.alpha);
  read_field(obj, "gamma", cfg.gamma);
  read_field(obj, "epsilon_start", cfg.epsilon_start);
  read_field(obj, "epsilon_end", cfg.epsilon_end);
  read_field(obj, "epsilon_decay_steps", cfg.epsilon_decay_steps);
  obj.finish();
  return cfg;
}

inline CredoPolicyConfig parse_credo_policy(const json& j, BatchRewardSource& source,
                                            bool& normalize) {
  StrictObject obj(j, "credo_policy");
  CredoPolicyConfig cfg;
  read_field(obj, "epsilon", cfg.epsilon);
  read_field(obj, "alpha", cfg.alpha);
  read_field(obj, "gamma", cfg.gamma);
  read_field(obj, "resolution", cfg.resolution);
  if (const json* v = obj.take("batch_reward_source")) {
    const auto s = get_as<std::string>(*v, "credo_policy.batch_reward_source");
    if (s == "credo") {
      source = BatchRewardSource::credo;
    } else if (s == "env") {
      source = BatchRewardSource::env;
    } else {
      throw ConfigError("credo_policy.batch_reward_source: '" + s + "' (credo | env)");
    }
  }
  read_field(obj, "normalize_batch_reward", normalize);
  obj.finish();
  return cfg;
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(const json& j) {
  detail::StrictObject obj(j, "");
  ExperimentConfig cfg;
  cfg.initial_credos = {CredoVector{0.0, 0.0, 1.0}};  // fully system-focused
  if (const json* v = obj.take("env")) cfg.env = detail::parse_env(*v);
  detail::read_field(obj, "num_agents", cfg.num_agents);
  detail::read_field(obj, "team_size", cfg.team_size);
  if (const json* v = obj.take("credo_mode")) {
    const auto s = detail::get_as<std::string>(*v, "credo_mode");
    if (s == "static") {
      cfg.credo_mode = CredoMode::static_credo;
    } else if (s == "tuning") {
      cfg.credo_mode = CredoMode::tuning;
    } else {
      throw ConfigError("credo_mode: '" + s + "' (static | tuning)");
    }
  }
  if (const json* v = obj.take("initial_credos")) {
    cfg.initial_credos.clear();
    if (!v->is_array() || v->empty()) {
      throw ConfigError("initial_credos: expected [s,t,y] or a list of credos");
    }
    if (v->front().is_array()) {
      for (std::size_t i = 0; i < v->size(); ++i) {
        cfg.initial_credos.push_back(
            detail::parse_credo((*v)[i], "initial_credos[" + std::to_string(i) + "]"));
      }
    } else {
      cfg.initial_credos.push_back(detail::parse_credo(*v, "initial_credos"));
    }
  }
  detail::read_field(obj, "episodes_per_batch", cfg.episodes_per_batch);
  detail::read_field(obj, "total_batches", cfg.total_batches);
  if (const json* v = obj.take("learner")) cfg.learner = detail::parse_learner(*v);
  if (const json* v = obj.take("credo_policy")) {
    cfg.credo_policy =
        detail::parse_credo_policy(*v, cfg.batch_reward_source, cfg.normalize_batch_reward);
  }
  detail::read_field(obj, "trials", cfg.trials);
  detail::read_field(obj, "master_seed", cfg.master_seed);
  obj.finish();
  cfg.validate();
  return cfg;
}

/// Applies one "key.path=value" override onto the raw JSON document. The
/// value is parsed as JSON when possible, else taken as a string.
inline void apply_override(json& doc, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + spec + "' must look like key.path=value");
  }
  const std::string path = spec.substr(0, eq);
  const std::string raw = spec.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;  // bare string

  json* node = &doc;
  std::istringstream segments(path);
  std::string segment;
  std::vector<std::string> parts;
  while (std::getline(segments, segment, '.')) {
    if (segment.empty()) throw ConfigError("override '" + spec + "': empty path segment");
    parts.push_back(segment);
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    node = &(*node)[parts[i]];
  }
  (*node)[parts.back()] = value;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("malformed JSON in " + path);
  return doc;
}

inline ExperimentConfig load_experiment_config(const std::string& path,
                                               const std::vector<std::string>& overrides = {}) {
  json doc = load_json_file(path);
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_experiment_config(doc);
}

/// Canonical JSON echo of a parsed config, written into summaries so a run
/// can be reproduced from its outputs alone.
inline json config_to_json(const ExperimentConfig& cfg) {
  json j;
  if (cfg.is_bandit()) {
    const auto& b = std::get<BanditConfig>(cfg.env);
    j["env"] = {{"type", "bandit"},
                {"target", {b.target.to_credo().self_weight, b.target.to_credo().team_weight,
                            b.target.to_credo().system_weight}},
                {"noise_sigma", b.noise_sigma},
                {"episode_length", b.episode_length},
                {"resolution", b.target.resolution()}};
  } else {
    const auto& c = std::get<CleanupConfig>(cfg.env);
    j["env"] = {{"type", "cleanup"},
                {"grid_width", c.grid_width},
                {"grid_height", c.grid_height},
                {"river_columns", {c.river_col_first, c.river_col_last}},
                {"orchard_columns", {c.orchard_col_first, c.orchard_col_last}},
                {"waste_spawn_prob", c.waste_spawn_prob},
                {"apple_spawn_max_prob", c.apple_spawn_max_prob},
                {"threshold_depletion", c.threshold_depletion},
                {"threshold_restoration", c.threshold_restoration},
                {"initial_pollution", c.initial_pollution},
                {"sight_radius", c.sight_radius},
                {"clean_reach", c.clean_reach},
                {"episode_length", c.episode_length}};
  }
  j["num_agents"] = cfg.num_agents;
  j["team_size"] = cfg.team_size;
  j["credo_mode"] = cfg.credo_mode == CredoMode::tuning ? "tuning" : "static";
  json credos = json::array();
  for (const auto& cr : cfg.initial_credos) {
    credos.push_back({cr.self_weight, cr.team_weight, cr.system_weight});
  }
  j["initial_credos"] = credos;
  j["episodes_per_batch"] = cfg.episodes_per_batch;
  j["total_batches"] = cfg.total_batches;
  j["learner"] = {{"alpha", cfg.learner.alpha},
                  {"gamma", cfg.learner.gamma},
                  {"epsilon_start", cfg.learner.epsilon_start},
                  {"epsilon_end", cfg.learner.epsilon_end},
                  {"epsilon_decay_steps", cfg.learner.epsilon_decay_steps}};
  j["credo_policy"] = {{"epsilon", cfg.credo_policy.epsilon},
                       {"alpha", cfg.credo_policy.alpha},
                       {"gamma", cfg.credo_policy.gamma},
                       {"resolution", cfg.credo_policy.resolution},
                       {"batch_reward_source",
                        cfg.batch_reward_source == BatchRewardSource::env ? "env" : "credo"},
                       {"normalize_batch_reward", cfg.normalize_batch_reward}};
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  return j;
}

}  // namespace credo
