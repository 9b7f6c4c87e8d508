#pragma once

// Scenario orchestration: measure every anonymized input against the
// original graph, run by run, and collect the results into report tables.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anoneval/config.hpp"
#include "anoneval/graph.hpp"
#include "anoneval/perturbation.hpp"
#include "anoneval/report.hpp"

namespace anoneval {

using Logger = std::function<void(std::string_view)>;

/// Edge budget attributed to one anonymized graph, as the adversary of the
/// candidate-set model sees it.
struct BudgetInfo {
  std::size_t w = 0;
  bool estimated = false;
  PerturbMethod mode = PerturbMethod::Add;
};

/// Everything measured for one anonymized graph in one run.
struct RunMeasurement {
  std::vector<std::pair<std::string, Cell>> cells;
  std::optional<CandidateRun> candidates;
  std::vector<std::string> warnings;
};

struct GraphProfile;

/// Holds the original graph's precomputed measures so that every run only
/// pays for the anonymized side.
class Evaluator {
 public:
  Evaluator(const Graph& original, const ScenarioConfig& cfg);
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  /// Compares the original graph with itself.
  RunMeasurement measure_original() const;

  /// `source` names the file the graph was read from; it selects external
  /// cluster assignments and may be null for generated graphs.
  RunMeasurement measure(const Graph& anonymized, const BudgetInfo& budget,
                         const std::filesystem::path* source = nullptr) const;

  const Graph& original() const noexcept { return original_; }

 private:
  RunMeasurement compare(const GraphProfile& anon, const BudgetInfo& budget,
                         const std::filesystem::path* source) const;

  const Graph& original_;
  const ScenarioConfig& cfg_;
  std::unique_ptr<GraphProfile> profile_;
};

/// Budget of a file input: the --w override if given, otherwise the size of
/// the symmetric edge difference (flagged as estimated).
BudgetInfo budget_from_diff(const Graph& original, const Graph& anonymized,
                            std::optional<std::size_t> w_override);

/// Measures every run of one input and folds the runs into a report.
RunReport evaluate_input(const Evaluator& evaluator, const ScenarioConfig& cfg,
                         const AnonInput& input, std::string series, double x,
                         const Logger& log = {});

/// Validates `cfg`, loads the original graph and runs the configured scenario.
ReportSet run_scenario(const ScenarioConfig& cfg, const Logger& log = {});
/// Same, with the original graph already in memory.
ReportSet run_scenario(const ScenarioConfig& cfg, const Graph& original, const Logger& log = {});

ReportSet run_scenario_one(ScenarioConfig cfg, const Logger& log = {});
ReportSet run_scenario_two(ScenarioConfig cfg, const Logger& log = {});
ReportSet run_scenario_three(ScenarioConfig cfg, const Logger& log = {});

}  // namespace anoneval
