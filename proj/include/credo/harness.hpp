#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "credo/bandit.hpp"
#include "credo/cleanup.hpp"
#include "credo/config.hpp"
#include "credo/core.hpp"
#include "credo/credo_policy.hpp"
#include "credo/env.hpp"
#include "credo/learner.hpp"
#include "credo/metrics.hpp"
#include "credo/rng.hpp"
#include "credo/stats.hpp"

namespace credo {

/// Full time series of one seeded trial.
struct TrialRecord {
  int trial_index = 0;
  std::uint64_t trial_seed = 0;

  // One entry per batch.
  std::vector<double> mean_pop_reward;  // mean per-agent per-episode env reward
  std::vector<double> equality;         // inverse Gini of per-agent credo totals
  std::vector<double> batch_env_total;  // population env reward, whole batch
  std::vector<double> batch_credo_total;
  // [batch][agent]
  std::vector<std::vector<std::int64_t>> apples;
  std::vector<std::vector<std::int64_t>> cleans;
  std::vector<std::vector<CredoVector>> credos;  // credo in effect during the batch

  // Final checkpoints.
  std::vector<std::vector<double>> behavior_q;  // [agent][obs * action]
  std::vector<std::vector<double>> credo_q;     // [agent][state * move]; empty when static
  std::vector<CredoVector> final_credos;
};

/// Census over the last quarter of batches (at least one batch).
inline int final_quartile_start(int total_batches) {
  return total_batches - std::max(1, total_batches / 4);
}

inline double final_quartile_mean(std::span<const double> series) {
  const int start = final_quartile_start(static_cast<int>(series.size()));
  return mean_of(series.subspan(static_cast<std::size_t>(start)));
}

inline RoleCensus final_role_census(const TrialRecord& record, double dominance_ratio = 3.0) {
  const int batches = static_cast<int>(record.apples.size());
  const int start = final_quartile_start(batches);
  const std::size_t n = record.apples.empty() ? 0 : record.apples.front().size();
  std::vector<std::int64_t> apples(n, 0), cleans(n, 0);
  for (int b = start; b < batches; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      apples[i] += record.apples[static_cast<std::size_t>(b)][i];
      cleans[i] += record.cleans[static_cast<std::size_t>(b)][i];
    }
  }
  return classify_roles(apples, cleans, dominance_ratio);
}

struct ExperimentAggregate {
  // Per batch, across trials.
  std::vector<double> reward_mean, reward_ci95;
  std::vector<double> equality_mean, equality_ci95;
  // Per trial.
  std::vector<double> final_reward;    // final-quartile mean population reward
  std::vector<double> final_equality;  // final-quartile mean equality
  std::vector<RoleCensus> census;
};

struct ExperimentResult {
  std::vector<TrialRecord> trials;
  ExperimentAggregate aggregate;
};

namespace detail {

inline std::unique_ptr<Env> make_env(const ExperimentConfig& cfg) {
  if (cfg.is_bandit()) {
    return std::make_unique<CredoResponseBandit>(std::get<BanditConfig>(cfg.env),
                                                 cfg.num_agents);
  }
  return std::make_unique<CleanupEnv>(std::get<CleanupConfig>(cfg.env), cfg.num_agents);
}

struct PendingMove {
  CredoLatticePoint state;
  CredoMove move;
};

}  // namespace detail

/// Runs one seeded trial of the dual-timescale loop: behavioral learners act
/// every step on credo-shaped rewards; in tuning mode each agent's credo
/// policy observes the batch reward gathered under its latest move, updates,
/// and picks the next move. Deterministic function of (config, trial_index).
inline TrialRecord run_trial(const ExperimentConfig& cfg, int trial_index) {
  cfg.validate();
  const int n = cfg.num_agents;
  const auto nz = static_cast<std::size_t>(n);

  auto env = detail::make_env(cfg);
  const EnvDescriptor desc = env->descriptor();
  const TeamStructure structure = TeamStructure::blocks(n, cfg.team_size);
  std::vector<CredoVector> credos = cfg.credos_per_agent();

  RngStream env_stream(derive_seed(cfg.master_seed, "trial", trial_index, "env"));
  std::vector<QLearner> learners;
  std::vector<RngStream> behavior_rng;
  std::vector<RngStream> credo_rng;
  learners.reserve(nz);
  for (int i = 0; i < n; ++i) {
    learners.emplace_back(desc.observation_space_size, desc.num_actions, cfg.learner);
    behavior_rng.emplace_back(
        derive_seed(cfg.master_seed, "trial", trial_index, "agent", i, "behavior"));
    credo_rng.emplace_back(
        derive_seed(cfg.master_seed, "trial", trial_index, "agent", i, "credo"));
  }

  const bool tuning = cfg.credo_mode == CredoMode::tuning;
  std::vector<CredoPolicy> credo_policies;
  std::vector<CredoLatticePoint> points;
  std::vector<std::optional<detail::PendingMove>> pending(nz);
  if (tuning) {
    credo_policies.reserve(nz);
    points.reserve(nz);
    for (int i = 0; i < n; ++i) {
      credo_policies.emplace_back(cfg.credo_policy);
      points.push_back(
          lattice_point_from_credo(credos[static_cast<std::size_t>(i)],
                                   cfg.credo_policy.resolution));
    }
  }

  TrialRecord record;
  record.trial_index = trial_index;
  record.trial_seed = derive_seed(cfg.master_seed, "trial", trial_index);

  std::vector<int> actions(nz, 0);
  for (int batch = 0; batch < cfg.total_batches; ++batch) {
    std::vector<double> batch_env(nz, 0.0);
    std::vector<double> batch_credo(nz, 0.0);
    std::vector<std::int64_t> batch_apples(nz, 0);
    std::vector<std::int64_t> batch_cleans(nz, 0);

    for (int episode = 0; episode < cfg.episodes_per_batch; ++episode) {
      std::vector<int> obs = env->reset(env_stream.next_u64());
      for (int t = 0; t < desc.episode_length; ++t) {
        for (int i = 0; i < n; ++i) {
          actions[static_cast<std::size_t>(i)] = learners[static_cast<std::size_t>(i)]
              .select_action(obs[static_cast<std::size_t>(i)],
                             behavior_rng[static_cast<std::size_t>(i)]);
        }
        JointStep js = env->step(actions);
        const std::vector<double> credo_rewards = redistribute(structure, credos, js.rewards);
        for (int i = 0; i < n; ++i) {
          const auto iz = static_cast<std::size_t>(i);
          learners[iz].update(Transition{obs[iz], actions[iz], credo_rewards[iz], js.obs[iz],
                                         js.done});
          batch_env[iz] += js.rewards[iz];
          batch_credo[iz] += credo_rewards[iz];
          if (js.rewards[iz] > 0.0) ++batch_apples[iz];
          if (js.waste_removed[iz] > 0) ++batch_cleans[iz];
        }
        obs = std::move(js.obs);
      }
    }

    double env_total = 0.0, credo_total = 0.0;
    for (std::size_t i = 0; i < nz; ++i) {
      env_total += batch_env[i];
      credo_total += batch_credo[i];
    }
    record.mean_pop_reward.push_back(
        env_total / (static_cast<double>(n) * static_cast<double>(cfg.episodes_per_batch)));
    record.equality.push_back(inverse_gini(batch_credo).value);
    record.batch_env_total.push_back(env_total);
    record.batch_credo_total.push_back(credo_total);
    record.apples.push_back(batch_apples);
    record.cleans.push_back(batch_cleans);
    record.credos.push_back(credos);

    if (tuning) {
      for (int i = 0; i < n; ++i) {
        const auto iz = static_cast<std::size_t>(i);
        double batch_reward = cfg.batch_reward_source == BatchRewardSource::env
                                  ? batch_env[iz]
                                  : batch_credo[iz];
        batch_reward /= static_cast<double>(cfg.episodes_per_batch);
        if (cfg.normalize_batch_reward) {
          batch_reward /= static_cast<double>(desc.episode_length);
        }
        if (cfg.is_bandit()) {
          // Synthetic oracle: the batch reward depends only on the agent's
          // current lattice point.
          const auto& bandit = std::get<BanditConfig>(cfg.env);
          batch_reward = bandit_batch_reward(bandit.target, points[iz], bandit.noise_sigma,
                                             credo_rng[iz]);
        }
        if (pending[iz]) {
          credo_policies[iz].update(pending[iz]->state, pending[iz]->move, batch_reward,
                                    points[iz]);
        }
        const CredoMove move = credo_policies[iz].select(points[iz], credo_rng[iz]);
        pending[iz] = detail::PendingMove{points[iz], move};
        points[iz] = apply_move(points[iz], move);
        credos[iz] = points[iz].to_credo();
      }
    }
  }

  record.final_credos = credos;
  for (int i = 0; i < n; ++i) {
    record.behavior_q.push_back(learners[static_cast<std::size_t>(i)].table());
  }
  if (tuning) {
    for (int i = 0; i < n; ++i) {
      record.credo_q.push_back(credo_policies[static_cast<std::size_t>(i)].table());
    }
  }
  return record;
}

inline ExperimentAggregate aggregate_trials(std::span<const TrialRecord> records) {
  ExperimentAggregate agg;
  if (records.empty()) return agg;
  const std::size_t batches = records.front().mean_pop_reward.size();
  std::vector<double> column(records.size());
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t k = 0; k < records.size(); ++k) column[k] = records[k].mean_pop_reward[b];
    agg.reward_mean.push_back(mean_of(column));
    agg.reward_ci95.push_back(ci95_half_width(column));
    for (std::size_t k = 0; k < records.size(); ++k) column[k] = records[k].equality[b];
    agg.equality_mean.push_back(mean_of(column));
    agg.equality_ci95.push_back(ci95_half_width(column));
  }
  for (const TrialRecord& r : records) {
    agg.final_reward.push_back(final_quartile_mean(r.mean_pop_reward));
    agg.final_equality.push_back(final_quartile_mean(r.equality));
    agg.census.push_back(final_role_census(r));
  }
  return agg;
}

/// Runs all trials (optionally across worker threads; trials are independent
/// and the result does not depend on scheduling) and aggregates.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs = 1) {
  cfg.validate();
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  ExperimentResult result;
  result.trials.resize(static_cast<std::size_t>(cfg.trials));

  const int workers = std::min(jobs, cfg.trials);
  if (workers <= 1) {
    for (int k = 0; k < cfg.trials; ++k) {
      result.trials[static_cast<std::size_t>(k)] = run_trial(cfg, k);
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mutex;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const int k = next.fetch_add(1);
          if (k >= cfg.trials || failed.load()) return;
          try {
            result.trials[static_cast<std::size_t>(k)] = run_trial(cfg, k);
          } catch (const std::exception& e) {
            std::scoped_lock lock(error_mutex);
            failed.store(true);
            if (error.empty()) error = e.what();
            return;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("trial failed: " + error);
  }

  result.aggregate = aggregate_trials(result.trials);
  return result;
}

}  // namespace credo
