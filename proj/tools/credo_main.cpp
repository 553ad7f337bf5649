// Command-line front end: run experiments, sweep credo initializations,
// compare completed experiment directories.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "credo/credo.hpp"

namespace {

namespace fs = std::filesystem;

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const std::vector<std::string>& overrides, int trials_override, int jobs) {
  credo::ExperimentConfig cfg = credo::load_experiment_config(config_path, overrides);
  if (trials_override > 0) cfg.trials = trials_override;
  credo::log_info("running %d trial(s) of %d batches with %d worker(s)", cfg.trials,
                  cfg.total_batches, jobs);
  const credo::ExperimentResult result = credo::run_experiment(cfg, jobs);
  credo::write_experiment_outputs(out_dir, cfg, result);
  const double reward = credo::mean_of(result.aggregate.final_reward);
  const double equality = credo::mean_of(result.aggregate.final_equality);
  std::printf("final mean population reward: %s\n", credo::format_double(reward).c_str());
  std::printf("final equality: %s\n", credo::format_double(equality).c_str());
  credo::log_info("outputs written to %s", out_dir.c_str());
  return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_dir, int jobs) {
  const credo::json doc = credo::load_json_file(spec_path);
  const credo::SweepSpec spec = credo::parse_sweep_spec(doc);
  // base_config is resolved relative to the sweep spec's directory
  fs::path base = spec.base_config_path;
  if (base.is_relative()) base = fs::path(spec_path).parent_path() / base;
  const credo::ExperimentConfig base_cfg = credo::load_experiment_config(base.string());
  credo::log_info("sweeping %zu credo point(s), %d trial(s) each", spec.points.size(),
                  spec.trials_per_point > 0 ? spec.trials_per_point : base_cfg.trials);
  const std::vector<credo::SweepRow> rows = credo::run_sweep(spec, base_cfg, jobs);
  fs::create_directories(out_dir);
  const std::string csv = (fs::path(out_dir) / "sweep.csv").string();
  credo::write_sweep_csv(csv, rows);
  std::printf("wrote %zu sweep rows to %s\n", rows.size(), csv.c_str());
  return 0;
}

int cmd_report(const std::vector<std::string>& dirs, const std::string& out_csv) {
  std::vector<credo::ExperimentReport> reports;
  reports.reserve(dirs.size());
  for (const std::string& d : dirs) {
    reports.push_back(credo::analyze_experiment_dir(d));
  }
  std::printf("%-28s %6s %16s %10s %16s %10s\n", "experiment", "trials", "median_reward",
              "ci95", "median_equality", "ci95");
  for (const auto& r : reports) {
    std::printf("%-28s %6d %16.4f %10.4f %16.4f %10.4f\n", r.name.c_str(), r.trials,
                r.median_reward, r.ci95_reward, r.median_equality, r.ci95_equality);
  }
  if (reports.size() > 1) {
    std::printf("\npairwise median ordering (final-quartile mean population reward):\n");
    for (const std::string& line : credo::pairwise_median_ordering(reports)) {
      std::printf("  %s\n", line.c_str());
    }
  }
  credo::write_report_csv(out_csv, reports);
  credo::log_info("report written to %s", out_csv.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"credo reward-redistribution simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::vector<std::string> overrides;
  int trials = 0, jobs = 1;

  CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--override", overrides, "config override key.path=value (repeatable)");
  run->add_option("--trials", trials, "override the trial count");
  run->add_option("--jobs", jobs, "parallel trial workers");

  std::string sweep_spec, sweep_out = "sweep_out";
  int sweep_jobs = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "run one experiment per credo lattice point");
  sweep->add_option("--config", sweep_spec, "sweep spec (JSON)")->required();
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_option("--jobs", sweep_jobs, "parallel trial workers");

  std::vector<std::string> report_dirs;
  std::string report_csv = "report.csv";
  CLI::App* report = app.add_subcommand("report", "compare completed experiment directories");
  report->add_option("dirs", report_dirs, "experiment output directories")
      ->required()
      ->expected(-1);
  report->add_option("--out", report_csv, "report CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, overrides, trials, jobs);
    if (sweep->parsed()) return cmd_sweep(sweep_spec, sweep_out, sweep_jobs);
    if (report->parsed()) return cmd_report(report_dirs, report_csv);
  } catch (const credo::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
