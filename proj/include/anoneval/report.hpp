#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace anoneval {

struct Aggregate {
  double mean = 0.0;
  std::optional<double> ci95;  // half-width; absent for a single run
  std::size_t runs = 0;
};

/// Two-sided 97.5% quantile of Student's t with `df` degrees of freedom.
double student_t_975(std::size_t df);

/// Mean and 95% confidence half-width t(0.975, r-1) * s / sqrt(r). A fixed
/// `quantile` replaces the t quantile (e.g. 1.96 for the normal approximation).
Aggregate aggregate(std::span<const double> values, std::optional<double> quantile = std::nullopt);

/// One metric value for one run, or the reason it could not be computed.
struct Cell {
  std::optional<double> value;
  std::string na_reason;

  static Cell of(double v) { return {v, {}}; }
  static Cell na(std::string reason) { return {std::nullopt, std::move(reason)}; }
  std::string to_string() const;
};

struct MetricRuns {
  std::string metric_id;
  std::vector<Cell> runs;
};

/// Candidate-set histogram for one run.
struct CandidateRun {
  std::array<double, 5> buckets{};
  std::size_t w = 0;
  bool w_estimated = false;
  std::string possible_worlds;  // exact decimal
  std::string na_reason;        // non-empty if the profile could not be built
};

/// Everything measured for one graph (the original, or one anonymized input
/// observed over r runs).
struct RunReport {
  std::string series;  // sequence label; empty outside scenario III
  std::string label;
  double x = 0.0;      // position on the perturbation axis
  std::vector<MetricRuns> metrics;
  std::vector<CandidateRun> candidates;
  std::vector<std::string> warnings;

  std::size_t run_count() const;
};

struct ReportSet {
  int scenario = 1;
  std::vector<RunReport> reports;
  nlohmann::json config;                 // echoed into the JSON mirror
  std::optional<double> ci_quantile;     // override for aggregate()
};

/// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

/// Aggregated metric table: graph_label, metric_id, mean, ci95, run_0..run_{r-1}.
std::string metrics_csv(const ReportSet& set);
/// One row per graph: graph_label, c1, c2_4, c5_10, c11_20, c21_inf, w, possible_worlds.
std::string candidates_csv(const ReportSet& set);
/// Plot data: series, metric_id, x, y, yerr.
std::string plot_csv(const ReportSet& set);
nlohmann::json to_json(const ReportSet& set);

/// Writes scenario<k>_metrics.csv, scenario<k>_candh1.csv and (for scenarios
/// II and III) scenario<k>_plot.csv when "csv" is requested, and
/// scenario<k>.json when "json" is. Returns the written paths.
std::vector<std::filesystem::path> emit_reports(const ReportSet& set,
                                                const std::vector<std::string>& formats,
                                                const std::filesystem::path& out_dir);

}  // namespace anoneval
