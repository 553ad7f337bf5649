#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "credo/config.hpp"
#include "credo/harness.hpp"
#include "credo/io.hpp"
#include "credo/stats.hpp"

namespace credo {

/// Final-quartile statistics of one completed experiment directory.
struct ExperimentReport {
  std::string name;  // directory name
  int trials = 0;
  std::vector<double> final_reward;    // per trial
  std::vector<double> final_equality;  // per trial
  double median_reward = 0.0;
  double ci95_reward = 0.0;
  double median_equality = 0.0;
  double ci95_equality = 0.0;
};

inline ExperimentReport analyze_experiment_dir(const std::filesystem::path& dir) {
  const auto csv = dir / "timeseries.csv";
  if (!std::filesystem::exists(csv)) {
    throw std::runtime_error("missing timeseries.csv in " + dir.string());
  }
  TimeseriesData data;
  try {
    data = read_timeseries_csv(csv.string());
  } catch (const std::exception& e) {
    throw std::runtime_error("corrupt timeseries in " + dir.string() + ": " + e.what());
  }
  ExperimentReport report;
  report.name = dir.filename().empty() ? dir.string() : dir.filename().string();
  report.trials = static_cast<int>(data.mean_pop_reward.size());
  for (std::size_t k = 0; k < data.mean_pop_reward.size(); ++k) {
    report.final_reward.push_back(final_quartile_mean(data.mean_pop_reward[k]));
    report.final_equality.push_back(final_quartile_mean(data.equality[k]));
  }
  report.median_reward = median_of(report.final_reward);
  report.ci95_reward = ci95_half_width(report.final_reward);
  report.median_equality = median_of(report.final_equality);
  report.ci95_equality = ci95_half_width(report.final_equality);
  return report;
}

inline void write_report_csv(const std::string& path,
                             std::span<const ExperimentReport> reports) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "experiment,trials,median_final_reward,ci95_reward,median_final_equality,"
         "ci95_equality\n";
  for (const auto& r : reports) {
    out << r.name << ',' << r.trials << ',' << format_double(r.median_reward) << ','
        << format_double(r.ci95_reward) << ',' << format_double(r.median_equality) << ','
        << format_double(r.ci95_equality) << "\n";
  }
}

/// "A > B (median 12.5 vs 8.1)" lines for every pair, "tied" on exact equality.
inline std::vector<std::string> pairwise_median_ordering(
    std::span<const ExperimentReport> reports) {
  std::vector<std::string> lines;
  for (std::size_t a = 0; a < reports.size(); ++a) {
    for (std::size_t b = a + 1; b < reports.size(); ++b) {
      std::ostringstream os;
      if (reports[a].median_reward == reports[b].median_reward) {
        os << reports[a].name << " and " << reports[b].name << " tied (median "
           << format_double(reports[a].median_reward) << ")";
      } else {
        const auto& hi = reports[a].median_reward > reports[b].median_reward ? reports[a]
                                                                             : reports[b];
        const auto& lo = reports[a].median_reward > reports[b].median_reward ? reports[b]
                                                                             : reports[a];
        os << hi.name << " > " << lo.name << " (median " << format_double(hi.median_reward)
           << " vs " << format_double(lo.median_reward) << ")";
      }
      lines.push_back(os.str());
    }
  }
  return lines;
}

/// Sweep over initial-credo lattice points (the data behind a credo heatmap).
struct SweepSpec {
  std::string base_config_path;
  std::vector<CredoLatticePoint> points;  // defaults to the full lattice
  int trials_per_point = 0;               // 0: keep the base config's trial count
};

inline SweepSpec parse_sweep_spec(const json& j, double lattice_resolution = 0.2) {
  detail::StrictObject obj(j, "");
  SweepSpec spec;
  if (const json* v = obj.take("base_config")) {
    spec.base_config_path = detail::get_as<std::string>(*v, "base_config");
  } else {
    throw ConfigError("base_config: required (path to an experiment config)");
  }
  double resolution = lattice_resolution;
  detail::read_field(obj, "resolution", resolution);
  if (const json* v = obj.take("points")) {
    if (!v->is_array()) throw ConfigError("points: expected a list of credos");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const CredoVector cr =
          detail::parse_credo((*v)[i], "points[" + std::to_string(i) + "]");
      try {
        spec.points.push_back(lattice_point_from_credo(cr, resolution));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("points[" + std::to_string(i) + "]: " + e.what());
      }
    }
  } else {
    spec.points = enumerate_lattice(resolution);
  }
  detail::read_field(obj, "trials_per_point", spec.trials_per_point);
  obj.finish();
  if (spec.points.empty()) throw ConfigError("points: must not be empty");
  std::set<std::array<int, 3>> seen;
  for (const auto& p : spec.points) {
    if (!seen.insert(p.steps).second) {
      const CredoVector cr = p.to_credo();
      throw ConfigError("duplicate sweep cell <" + format_double(cr.self_weight) + ", " +
                        format_double(cr.team_weight) + ", " +
                        format_double(cr.system_weight) + ">");
    }
  }
  return spec;
}

struct SweepRow {
  CredoVector credo;
  double mean_final_reward = 0.0;
  double ci95 = 0.0;
  double equality_final = 0.0;
};

inline void write_sweep_csv(const std::string& path, std::span<const SweepRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "psi,phi,omega,mean_final_reward,ci95,equality_final\n";
  for (const SweepRow& r : rows) {
    out << format_double(r.credo.self_weight) << ',' << format_double(r.credo.team_weight)
        << ',' << format_double(r.credo.system_weight) << ','
        << format_double(r.mean_final_reward) << ',' << format_double(r.ci95) << ','
        << format_double(r.equality_final) << "\n";
  }
}

/// Runs one experiment per sweep point with every agent initialized at that
/// credo; returns the rows of sweep.csv in point order.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, const ExperimentConfig& base,
                                       int jobs = 1) {
  std::vector<SweepRow> rows;
  rows.reserve(spec.points.size());
  for (const CredoLatticePoint& point : spec.points) {
    ExperimentConfig cfg = base;
    cfg.initial_credos = {point.to_credo()};
    if (spec.trials_per_point > 0) cfg.trials = spec.trials_per_point;
    const ExperimentResult result = run_experiment(cfg, jobs);
    SweepRow row;
    row.credo = point.to_credo();
    row.mean_final_reward = mean_of(result.aggregate.final_reward);
    row.ci95 = ci95_half_width(result.aggregate.final_reward);
    row.equality_final = mean_of(result.aggregate.final_equality);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace credo
