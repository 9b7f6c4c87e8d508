// Command-line front end: scenario runs, perturbation export and one-off
// metric comparisons.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "anoneval/config.hpp"
#include "anoneval/errors.hpp"
#include "anoneval/graph.hpp"
#include "anoneval/perturbation.hpp"
#include "anoneval/report.hpp"
#include "anoneval/scenario.hpp"

namespace fs = std::filesystem;
using namespace anoneval;

namespace {

constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;

struct Flags {
  std::string config;
  std::string original;
  std::string label;
  std::vector<std::string> anon;
  std::vector<std::string> perturb;
  std::vector<std::string> sequence;
  std::string metrics;
  std::string clustering;
  double top_x = 0.2;
  double damping = 0.85;
  double pr_tol = 1e-10;
  std::size_t w = 0;
  std::string out;
  std::string format;
  double ci_quantile = 1.96;
  std::uint64_t seed = 1;
  bool extra_columns = false;
  bool write_perturbed = false;
  bool quiet = false;
};

struct Options {
  CLI::Option* top_x = nullptr;
  CLI::Option* damping = nullptr;
  CLI::Option* pr_tol = nullptr;
  CLI::Option* w = nullptr;
  CLI::Option* ci_quantile = nullptr;
  CLI::Option* seed = nullptr;
};

void add_common(CLI::App* cmd, Flags& f, Options& o) {
  cmd->add_option("--config", f.config, "JSON scenario manifest");
  cmd->add_option("--original", f.original, "Original edge list");
  cmd->add_option("--label", f.label, "Label of the original graph in reports");
  cmd->add_option("--anon", f.anon,
                  "Anonymized edge list; a comma list gives the runs of one input")
      ->take_all();
  cmd->add_option("--perturb", f.perturb, "Generated input METHOD:PCT:RUNS:SEED")->take_all();
  cmd->add_option("--metrics", f.metrics, "Comma-separated metric ids");
  cmd->add_option("--clustering", f.clustering, "Comma-separated clustering methods");
  o.top_x = cmd->add_option("--top-x", f.top_x, "Top influential fraction for rrti");
  o.damping = cmd->add_option("--damping", f.damping, "PageRank damping");
  o.pr_tol = cmd->add_option("--pr-tol", f.pr_tol, "PageRank L1 tolerance");
  o.w = cmd->add_option("--w", f.w, "Edge budget assumed for file inputs");
  o.ci_quantile = cmd->add_option("--ci-quantile", f.ci_quantile,
                                  "Fixed quantile replacing Student's t in the 95% CI");
  o.seed = cmd->add_option("--seed", f.seed, "Seed of the multilevel visit order");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--format", f.format, "Comma-separated output formats (csv, json)");
  cmd->add_flag("--extra-columns", f.extra_columns,
                "Ignore columns after the first two (weights, timestamps)");
  cmd->add_flag("--write-perturbed", f.write_perturbed, "Write generated graphs to OUT/graphs");
  cmd->add_flag("-q,--quiet", f.quiet, "Suppress progress messages");
}

// A sequence item is either a perturbation spec or a comma list of files.
std::vector<AnonInput> parse_item(const std::string& item, const std::string& base_label) {
  if (std::count(item.begin(), item.end(), ':') == 3) {
    try {
      parse_method(item.substr(0, item.find(':')));
      return parse_perturb_flag(item, base_label);
    } catch (const ArgumentError&) {
      // not a method prefix, so treat it as a path
    }
  }
  AnonInput in;
  for (const auto& p : split_list(item)) in.files.emplace_back(p);
  if (in.files.empty()) throw ConfigError("empty anonymized input");
  in.label = in.files.front().stem().string();
  return {in};
}

Sequence parse_sequence(const std::string& text, const std::string& base_label) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("sequence must look like LABEL=ITEM[;ITEM...], got '" + text + "'");
  }
  Sequence s{text.substr(0, eq), {}};
  std::string rest = text.substr(eq + 1);
  std::size_t start = 0;
  while (start <= rest.size()) {
    auto end = rest.find(';', start);
    if (end == std::string::npos) end = rest.size();
    const auto item = rest.substr(start, end - start);
    if (!item.empty()) {
      auto inputs = parse_item(item, base_label);
      s.inputs.insert(s.inputs.end(), inputs.begin(), inputs.end());
    }
    start = end + 1;
  }
  return s;
}

ScenarioConfig build_config(int scenario, const Flags& f, const Options& o) {
  ScenarioConfig cfg;
  if (!f.config.empty()) cfg = load_config_file(f.config);
  cfg.scenario = scenario;
  if (!f.original.empty()) {
    cfg.original = f.original;
    if (f.label.empty()) cfg.original_label = cfg.original.stem().string();
  }
  if (!f.label.empty()) cfg.original_label = f.label;
  if (cfg.original_label.empty()) cfg.original_label = cfg.original.stem().string();

  if (!f.anon.empty() || !f.perturb.empty()) {
    Sequence s{"sequence", {}};
    for (const auto& a : f.anon) {
      auto inputs = parse_item(a, cfg.original_label);
      s.inputs.insert(s.inputs.end(), inputs.begin(), inputs.end());
    }
    for (const auto& p : f.perturb) {
      auto inputs = parse_perturb_flag(p, cfg.original_label);
      s.inputs.insert(s.inputs.end(), inputs.begin(), inputs.end());
    }
    cfg.sequences = {s};
  }
  if (!f.sequence.empty()) {
    cfg.sequences.clear();
    for (const auto& text : f.sequence) cfg.sequences.push_back(parse_sequence(text, cfg.original_label));
  }
  if (!f.metrics.empty()) cfg.metrics = split_list(f.metrics);
  if (cfg.metrics.empty() && f.config.empty()) cfg.metrics = registered_metrics();
  if (!f.clustering.empty()) cfg.clustering = split_list(f.clustering);
  if (cfg.clustering.empty() && f.config.empty()) cfg.clustering = registered_clustering_methods();
  if (o.top_x->count()) cfg.top_x = f.top_x;
  if (o.damping->count()) cfg.pagerank.damping = f.damping;
  if (o.pr_tol->count()) cfg.pagerank.tol = f.pr_tol;
  if (o.w->count()) cfg.w_override = f.w;
  if (o.ci_quantile->count()) cfg.ci_quantile = f.ci_quantile;
  if (o.seed->count()) cfg.cluster_seed = f.seed;
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (!f.format.empty()) cfg.formats = split_list(f.format);
  if (f.extra_columns) cfg.ignore_extra_columns = true;
  if (f.write_perturbed) cfg.write_perturbed = true;
  return cfg;
}

Logger make_logger(bool quiet) {
  if (quiet) return {};
  return [](std::string_view msg) { std::cerr << "anoneval: " << msg << '\n'; };
}

int run_scenario_command(int scenario, const Flags& f, const Options& o) {
  const auto cfg = build_config(scenario, f, o);
  const auto log = make_logger(f.quiet);
  const auto set = run_scenario(cfg, log);
  for (const auto& path : emit_reports(set, cfg.formats, cfg.out_dir)) {
    std::cout << path.string() << '\n';
  }
  return 0;
}

int run_perturb_command(const Flags& f, const Options& o) {
  auto cfg = build_config(1, f, o);
  if (cfg.original.empty()) throw ConfigError("--original is required");
  if (f.perturb.empty()) throw ConfigError("at least one --perturb is required");
  ParseOptions options;
  options.ignore_extra_columns = cfg.ignore_extra_columns;
  const Graph g = load_graph_file(cfg.original, options);
  const fs::path dir = f.out.empty() ? fs::path(".") : fs::path(f.out);
  fs::create_directories(dir);
  for (const auto& text : f.perturb) {
    for (const auto& input : parse_perturb_flag(text, cfg.original_label)) {
      for (std::size_t r = 0; r < input.perturbation->runs; ++r) {
        const auto path = dir / perturbed_file_name(cfg.original_label, *input.perturbation, r);
        write_edge_list_file(path, perturb(g, *input.perturbation, r));
        std::cout << path.string() << '\n';
      }
    }
  }
  return 0;
}

// Without --anon the original graph is compared with itself, which lists
// its raw measures.
int run_metrics_command(const Flags& f, const Options& o) {
  auto cfg = build_config(1, f, o);
  if (cfg.original.empty()) throw ConfigError("--original is required");
  if (cfg.sequences.empty()) {
    AnonInput self;
    self.label = cfg.original_label;
    self.files = {cfg.original};
    cfg.sequences = {{"sequence", {self}}};
  }
  const auto set = run_scenario(cfg, make_logger(f.quiet));
  std::cout << metrics_csv(set);
  if (!f.out.empty()) emit_reports(set, cfg.formats, cfg.out_dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Utility and re-identification risk evaluation for anonymized graphs"};
  app.require_subcommand(1);

  Flags flags;
  Options opts;
  auto* s1 = app.add_subcommand("scenario1", "Original graph against one anonymized input");
  auto* s2 = app.add_subcommand("scenario2", "Original graph against a sequence of inputs");
  auto* s3 = app.add_subcommand("scenario3", "Original graph against two or more sequences");
  auto* pt = app.add_subcommand("perturb", "Write randomly perturbed copies of a graph");
  auto* mt = app.add_subcommand("metrics", "Print the metric table for one comparison");
  // Each subcommand owns its options; only the one that runs is parsed.
  std::vector<Options> per(5);
  std::vector<CLI::App*> cmds{s1, s2, s3, pt, mt};
  for (std::size_t i = 0; i < cmds.size(); ++i) add_common(cmds[i], flags, per[i]);
  s3->add_option("--sequence", flags.sequence,
                 "LABEL=ITEM[;ITEM...] where ITEM is METHOD:PCT:RUNS:SEED or a comma list of files")
      ->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      if (!cmds[i]->parsed()) continue;
      opts = per[i];
      switch (i) {
        case 0:
        case 1:
        case 2:
          return run_scenario_command(static_cast<int>(i) + 1, flags, opts);
        case 3:
          return run_perturb_command(flags, opts);
        default:
          return run_metrics_command(flags, opts);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "anoneval: " << e.what() << '\n';
    return kConfigExit;
  } catch (const ArgumentError& e) {
    std::cerr << "anoneval: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "anoneval: " << e.what() << '\n';
    return kDataExit;
  }
  return kConfigExit;
}
