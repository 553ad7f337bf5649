#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "credo/config.hpp"
#include "credo/harness.hpp"

namespace credo {

/// Shortest round-trip decimal form; deterministic, so identical runs write
/// byte-identical files.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

inline constexpr const char* kTimeseriesHeader =
    "trial,batch,mean_pop_reward,equality,agent_id,apples,cleans,psi,phi,omega";

inline void write_timeseries_csv(const std::string& path,
                                 std::span<const TrialRecord> records) {
  std::ofstream out(path, std::ios::binary);  // \n line endings everywhere
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kTimeseriesHeader << "\n";
  for (const TrialRecord& r : records) {
    for (std::size_t b = 0; b < r.mean_pop_reward.size(); ++b) {
      for (std::size_t i = 0; i < r.credos[b].size(); ++i) {
        const CredoVector& cr = r.credos[b][i];
        out << r.trial_index << ',' << b << ',' << format_double(r.mean_pop_reward[b]) << ','
            << format_double(r.equality[b]) << ',' << i << ',' << r.apples[b][i] << ','
            << r.cleans[b][i] << ',' << format_double(cr.self_weight) << ','
            << format_double(cr.team_weight) << ',' << format_double(cr.system_weight)
            << "\n";
      }
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

/// Per-trial series parsed back from timeseries.csv; enough to rebuild the
/// aggregate comparisons in `report`.
struct TimeseriesData {
  // [trial] -> per-batch series
  std::vector<std::vector<double>> mean_pop_reward;
  std::vector<std::vector<double>> equality;
};

inline TimeseriesData read_timeseries_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTimeseriesHeader) {
    throw std::runtime_error(path + ": missing or unexpected timeseries header");
  }
  std::map<int, std::map<int, std::pair<double, double>>> by_trial;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != 10) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 10 fields");
    }
    try {
      const int trial = std::stoi(fields[0]);
      const int batch = std::stoi(fields[1]);
      by_trial[trial][batch] = {std::stod(fields[2]), std::stod(fields[3])};
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed row");
    }
  }
  if (by_trial.empty()) throw std::runtime_error(path + ": no data rows");
  TimeseriesData data;
  for (const auto& [trial, batches] : by_trial) {
    std::vector<double> reward, equality;
    int expected = 0;
    for (const auto& [batch, values] : batches) {
      if (batch != expected++) {
        throw std::runtime_error(path + ": trial " + std::to_string(trial) +
                                 " has non-contiguous batches");
      }
      reward.push_back(values.first);
      equality.push_back(values.second);
    }
    data.mean_pop_reward.push_back(std::move(reward));
    data.equality.push_back(std::move(equality));
  }
  return data;
}

inline json census_to_json(const RoleCensus& census) {
  json roles = json::array();
  for (Role r : census.role) roles.push_back(role_name(r));
  return json{{"roles", roles},
              {"pickers", census.count(Role::picker)},
              {"cleaners", census.count(Role::cleaner)},
              {"mixed", census.count(Role::mixed)},
              {"apple_count", census.apple_count},
              {"clean_count", census.clean_count}};
}

inline void write_summary_json(const std::string& path, const ExperimentConfig& cfg,
                               const ExperimentResult& result) {
  json j;
  j["config"] = config_to_json(cfg);
  json seeds = json::object();
  for (const TrialRecord& r : result.trials) {
    seeds["trial_" + std::to_string(r.trial_index)] = r.trial_seed;
  }
  j["trial_seeds"] = seeds;
  j["aggregate"] = {{"reward_mean", result.aggregate.reward_mean},
                    {"reward_ci95", result.aggregate.reward_ci95},
                    {"equality_mean", result.aggregate.equality_mean},
                    {"equality_ci95", result.aggregate.equality_ci95}};
  json finals = json::array();
  for (std::size_t k = 0; k < result.trials.size(); ++k) {
    finals.push_back({{"trial", result.trials[k].trial_index},
                      {"final_quartile_mean_pop_reward", result.aggregate.final_reward[k]},
                      {"final_quartile_equality", result.aggregate.final_equality[k]},
                      {"role_census", census_to_json(result.aggregate.census[k])}});
  }
  j["per_trial"] = finals;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

inline void write_checkpoint_json(const std::string& path, const TrialRecord& record) {
  json j;
  j["trial_index"] = record.trial_index;
  j["trial_seed"] = record.trial_seed;
  json credos = json::array();
  for (const CredoVector& cr : record.final_credos) {
    credos.push_back({cr.self_weight, cr.team_weight, cr.system_weight});
  }
  j["final_credos"] = credos;
  j["behavior_q"] = record.behavior_q;
  if (!record.credo_q.empty()) j["credo_q"] = record.credo_q;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump() << "\n";
}

/// Writes the full experiment output tree into `dir`: timeseries.csv,
/// summary.json, and one checkpoint per trial.
inline void write_experiment_outputs(const std::filesystem::path& dir,
                                     const ExperimentConfig& cfg,
                                     const ExperimentResult& result) {
  std::filesystem::create_directories(dir);
  write_timeseries_csv((dir / "timeseries.csv").string(), result.trials);
  write_summary_json((dir / "summary.json").string(), cfg, result);
  for (const TrialRecord& r : result.trials) {
    write_checkpoint_json(
        (dir / ("checkpoint_trial" + std::to_string(r.trial_index) + ".json")).string(), r);
  }
}

}  // namespace credo
