#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "anoneval/influence.hpp"
#include "anoneval/perturbation.hpp"

namespace anoneval {

/// One anonymized input: either a list of files (one per run) or a
/// perturbation to generate.
struct AnonInput {
  std::string label;
  std::vector<std::filesystem::path> files;
  std::optional<PerturbationSpec> perturbation;
  std::optional<double> x;  // position on the plot axis

  std::size_t runs() const { return perturbation ? perturbation->runs : files.size(); }
};

struct Sequence {
  std::string label;
  std::vector<AnonInput> inputs;
};

/// Cluster labels produced by an external tool, keyed by the graph file
/// they were computed on.
struct ExternalClustering {
  std::string id;
  std::map<std::filesystem::path, std::filesystem::path> by_graph;
};

struct ScenarioConfig {
  int scenario = 1;
  std::filesystem::path original;
  std::string original_label;
  std::vector<Sequence> sequences;

  std::vector<std::string> metrics;
  std::vector<std::string> clustering;
  std::vector<ExternalClustering> external_clustering;
  double top_x = 0.2;
  PagerankParams pagerank;
  double lambda_tol = 1e-9;
  std::size_t lambda_max_iter = 10000;
  std::uint64_t cluster_seed = 1;
  std::optional<std::size_t> w_override;
  std::optional<double> ci_quantile;
  bool ignore_extra_columns = false;
  bool write_perturbed = false;

  std::filesystem::path out_dir = "out";
  std::vector<std::string> formats = {"csv", "json"};
};

/// Metric ids accepted by the metric selection, in report order.
const std::vector<std::string>& registered_metrics();
const std::vector<std::string>& registered_clustering_methods();

/// Expands "METHOD:PCT:RUNS:SEED" into one input per percentage. PCT is a
/// number, a comma list ("1,5,10") or an integer range ("1..10").
std::vector<AnonInput> parse_perturb_flag(std::string_view text, std::string_view base_label);

/// Splits "a,b,c" into its non-empty parts.
std::vector<std::string> split_list(std::string_view text);

/// Reads the JSON manifest format documented in README.md. Relative paths
/// resolve against `base_dir`.
ScenarioConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
ScenarioConfig load_config_file(const std::filesystem::path& path);
nlohmann::json config_to_json(const ScenarioConfig& cfg);

/// Throws ConfigError if the configuration cannot describe a runnable scenario.
void validate(const ScenarioConfig& cfg);

}  // namespace anoneval
