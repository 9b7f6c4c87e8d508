#include "anoneval/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "anoneval/errors.hpp"

namespace anoneval {

namespace {

double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string> string_list(const nlohmann::json& j, std::string_view key) {
  if (j.is_string()) return split_list(j.get<std::string>());
  if (!j.is_array()) throw ConfigError("'" + std::string(key) + "' must be a list or a string");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(e.get<std::string>());
  return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::vector<AnonInput> inputs_from_json(const nlohmann::json& j, const std::filesystem::path& base,
                                        const std::string& original_label) {
  std::vector<AnonInput> out;
  if (j.is_string()) {
    AnonInput in;
    in.files.push_back(resolve(base, j.get<std::string>()));
    in.label = in.files.front().stem().string();
    out.push_back(std::move(in));
    return out;
  }
  if (!j.is_object()) throw ConfigError("an anonymized input must be a path or an object");

  if (j.contains("perturb")) {
    out = parse_perturb_flag(j.at("perturb").get<std::string>(), original_label);
    if (j.contains("label") && out.size() == 1) out.front().label = j.at("label").get<std::string>();
    if (j.contains("x") && out.size() == 1) out.front().x = j.at("x").get<double>();
    return out;
  }
  AnonInput in;
  const auto& files = j.at("files");
  if (files.is_string()) {
    in.files.push_back(resolve(base, files.get<std::string>()));
  } else {
    for (const auto& f : files) in.files.push_back(resolve(base, f.get<std::string>()));
  }
  if (in.files.empty()) throw ConfigError("an anonymized input lists no files");
  in.label = j.value("label", in.files.front().stem().string());
  if (j.contains("x")) in.x = j.at("x").get<double>();
  out.push_back(std::move(in));
  return out;
}

}  // namespace

const std::vector<std::string>& registered_metrics() {
  static const std::vector<std::string> ids = {
      "avg_dist",  "clustering", "transitivity", "edge_intersection", "betweenness",
      "closeness", "degree_centrality", "lambda1", "pagerank", "rrti",
      "frv",       "precision",  "deg_changed",  "neigh_changed",     "cand_h1",
      "possible_worlds"};
  return ids;
}

const std::vector<std::string>& registered_clustering_methods() {
  static const std::vector<std::string> ids = {"multilevel", "fastgreedy"};
  return ids;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto part = text.substr(start, end - start);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    if (!part.empty()) out.emplace_back(part);
    start = end + 1;
  }
  return out;
}

std::vector<AnonInput> parse_perturb_flag(std::string_view text, std::string_view base_label) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ':') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (parts.size() != 4) {
    throw ConfigError("perturbation must look like METHOD:PCT:RUNS:SEED, got '" + std::string(text) +
                      "'");
  }
  PerturbationSpec spec;
  try {
    spec.method = parse_method(parts[0]);
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  spec.runs = parse_unsigned(parts[2], "run count");
  spec.seed = parse_unsigned(parts[3], "seed");
  if (spec.runs == 0) throw ConfigError("perturbation run count must be positive");

  std::vector<double> levels;
  if (const auto dots = parts[1].find(".."); dots != std::string_view::npos) {
    const auto lo = parse_unsigned(parts[1].substr(0, dots), "percentage range");
    const auto hi = parse_unsigned(parts[1].substr(dots + 2), "percentage range");
    if (hi < lo) throw ConfigError("empty percentage range '" + std::string(parts[1]) + "'");
    for (auto p = lo; p <= hi; ++p) levels.push_back(static_cast<double>(p));
  } else {
    for (const auto& p : split_list(parts[1])) levels.push_back(parse_double(p, "percentage"));
  }
  if (levels.empty()) throw ConfigError("no perturbation percentage given");

  std::vector<AnonInput> out;
  for (double pct : levels) {
    if (!(pct >= 0.0 && pct <= 100.0)) {
      throw ConfigError("perturbation percentage " + format_percentage(pct) + " outside [0, 100]");
    }
    AnonInput in;
    in.perturbation = spec;
    in.perturbation->percentage = pct;
    in.x = pct;
    in.label = std::string(base_label) + "_" + std::string(method_name(spec.method)) +
               format_percentage(pct);
    out.push_back(std::move(in));
  }
  return out;
}

ScenarioConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  ScenarioConfig cfg;
  try {
    cfg.scenario = j.value("scenario", 1);
    const auto& original = j.at("original");
    if (original.is_string()) {
      cfg.original = resolve(base_dir, original.get<std::string>());
    } else {
      cfg.original = resolve(base_dir, original.at("path").get<std::string>());
      cfg.original_label = original.value("label", "");
    }
    cfg.original_label = j.value("label", cfg.original_label);
    if (cfg.original_label.empty()) cfg.original_label = cfg.original.stem().string();

    auto read_inputs = [&](const nlohmann::json& list) {
      std::vector<AnonInput> inputs;
      for (const auto& e : list) {
        auto more = inputs_from_json(e, base_dir, cfg.original_label);
        inputs.insert(inputs.end(), more.begin(), more.end());
      }
      return inputs;
    };
    if (j.contains("sequences")) {
      for (const auto& s : j.at("sequences")) {
        cfg.sequences.push_back({s.at("label").get<std::string>(), read_inputs(s.at("inputs"))});
      }
    }
    if (j.contains("anon")) {
      cfg.sequences.push_back({j.value("sequence_label", std::string("sequence")),
                               read_inputs(j.at("anon"))});
    }

    cfg.metrics = j.contains("metrics") ? string_list(j.at("metrics"), "metrics") : registered_metrics();
    cfg.clustering = j.contains("clustering") ? string_list(j.at("clustering"), "clustering")
                                              : registered_clustering_methods();
    if (j.contains("external_clustering")) {
      for (const auto& e : j.at("external_clustering")) {
        ExternalClustering ext;
        ext.id = e.at("id").get<std::string>();
        for (const auto& [graph, labels] : e.at("assignments").items()) {
          ext.by_graph[resolve(base_dir, graph)] = resolve(base_dir, labels.get<std::string>());
        }
        cfg.external_clustering.push_back(std::move(ext));
      }
    }
    cfg.top_x = j.value("top_x", cfg.top_x);
    cfg.pagerank.damping = j.value("damping", cfg.pagerank.damping);
    cfg.pagerank.tol = j.value("pr_tol", cfg.pagerank.tol);
    cfg.pagerank.max_iter = j.value("pr_max_iter", cfg.pagerank.max_iter);
    cfg.lambda_tol = j.value("lambda_tol", cfg.lambda_tol);
    cfg.lambda_max_iter = j.value("lambda_max_iter", cfg.lambda_max_iter);
    cfg.cluster_seed = j.value("cluster_seed", cfg.cluster_seed);
    if (j.contains("w") && !j.at("w").is_null()) cfg.w_override = j.at("w").get<std::size_t>();
    if (j.contains("ci_quantile") && !j.at("ci_quantile").is_null()) {
      cfg.ci_quantile = j.at("ci_quantile").get<double>();
    }
    cfg.ignore_extra_columns = j.value("ignore_extra_columns", cfg.ignore_extra_columns);
    cfg.write_perturbed = j.value("write_perturbed", cfg.write_perturbed);
    if (j.contains("out")) cfg.out_dir = resolve(base_dir, j.at("out").get<std::string>());
    if (j.contains("format")) cfg.formats = string_list(j.at("format"), "format");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  return cfg;
}

ScenarioConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

nlohmann::json config_to_json(const ScenarioConfig& cfg) {
  using nlohmann::json;
  json sequences = json::array();
  for (const auto& s : cfg.sequences) {
    json inputs = json::array();
    for (const auto& in : s.inputs) {
      json e = {{"label", in.label}};
      if (in.x) e["x"] = *in.x;
      if (in.perturbation) {
        const auto& p = *in.perturbation;
        // same form as --perturb so the echo can be read back
        e["perturb"] = std::string(method_name(p.method)) + ":" + format_percentage(p.percentage) +
                       ":" + std::to_string(p.runs) + ":" + std::to_string(p.seed);
      } else {
        json files = json::array();
        for (const auto& f : in.files) files.push_back(f.string());
        e["files"] = files;
      }
      inputs.push_back(std::move(e));
    }
    sequences.push_back({{"label", s.label}, {"inputs", std::move(inputs)}});
  }
  json external = json::array();
  for (const auto& ext : cfg.external_clustering) {
    json assignments = json::object();
    for (const auto& [graph, labels] : ext.by_graph) assignments[graph.string()] = labels.string();
    external.push_back({{"id", ext.id}, {"assignments", assignments}});
  }
  return {{"scenario", cfg.scenario},
          {"original", {{"path", cfg.original.string()}, {"label", cfg.original_label}}},
          {"sequences", sequences},
          {"metrics", cfg.metrics},
          {"clustering", cfg.clustering},
          {"external_clustering", external},
          {"top_x", cfg.top_x},
          {"damping", cfg.pagerank.damping},
          {"pr_tol", cfg.pagerank.tol},
          {"pr_max_iter", cfg.pagerank.max_iter},
          {"lambda_tol", cfg.lambda_tol},
          {"lambda_max_iter", cfg.lambda_max_iter},
          {"cluster_seed", cfg.cluster_seed},
          {"w", cfg.w_override ? json(*cfg.w_override) : json(nullptr)},
          {"ci_quantile", cfg.ci_quantile ? json(*cfg.ci_quantile) : json(nullptr)},
          {"ignore_extra_columns", cfg.ignore_extra_columns},
          {"write_perturbed", cfg.write_perturbed},
          {"out", cfg.out_dir.string()},
          {"format", cfg.formats}};
}

void validate(const ScenarioConfig& cfg) {
  if (cfg.scenario < 1 || cfg.scenario > 3) throw ConfigError("scenario must be 1, 2 or 3");
  if (cfg.original.empty()) throw ConfigError("no original graph given");
  if (cfg.sequences.empty()) throw ConfigError("no anonymized input given");
  for (const auto& s : cfg.sequences) {
    if (s.inputs.empty()) throw ConfigError("sequence '" + s.label + "' has no inputs");
    for (const auto& in : s.inputs) {
      if (in.runs() == 0) throw ConfigError("input '" + in.label + "' has no runs");
    }
  }
  switch (cfg.scenario) {
    case 1:
      if (cfg.sequences.size() != 1 || cfg.sequences.front().inputs.size() != 1) {
        throw ConfigError("scenario one compares the original with exactly one anonymized input");
      }
      break;
    case 2:
      if (cfg.sequences.size() != 1) throw ConfigError("scenario two takes a single sequence");
      break;
    case 3:
      if (cfg.sequences.size() < 2) {
        throw ConfigError("scenario three needs at least two sequences; use scenario2 for one");
      }
      break;
  }
  if (cfg.metrics.empty()) throw ConfigError("empty metric selection");
  for (const auto& m : cfg.metrics) {
    const auto& known = registered_metrics();
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw ConfigError("unknown metric '" + m + "'");
    }
  }
  for (const auto& c : cfg.clustering) {
    const auto& known = registered_clustering_methods();
    if (std::find(known.begin(), known.end(), c) == known.end()) {
      throw ConfigError("unknown clustering method '" + c + "'");
    }
  }
  if (!(cfg.top_x > 0.0 && cfg.top_x <= 1.0)) throw ConfigError("top-x must lie in (0, 1]");
  if (!(cfg.pagerank.damping > 0.0 && cfg.pagerank.damping < 1.0)) {
    throw ConfigError("damping must lie in (0, 1)");
  }
  for (const auto& f : cfg.formats) {
    if (f != "csv" && f != "json") throw ConfigError("unknown output format '" + f + "'");
  }
  if (cfg.formats.empty()) throw ConfigError("no output format selected");
}

}  // namespace anoneval
