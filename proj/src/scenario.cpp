#include "anoneval/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "anoneval/clustering.hpp"
#include "anoneval/errors.hpp"
#include "anoneval/gil.hpp"
#include "anoneval/influence.hpp"
#include "anoneval/parallel.hpp"
#include "anoneval/risk.hpp"

namespace anoneval {

namespace {

// A computed value or the reason it could not be computed.
template <typename T>
struct Outcome {
  std::optional<T> value;
  std::string reason;

  explicit operator bool() const { return value.has_value(); }
  const T& operator*() const { return *value; }
};

template <typename F>
auto capture(F&& f) -> Outcome<decltype(f())> {
  try {
    return {f(), {}};
  } catch (const Error& e) {
    return {std::nullopt, e.reason()};
  } catch (const std::exception&) {
    return {std::nullopt, "error"};
  }
}

template <typename A, typename B, typename F>
Cell combine(const Outcome<A>& a, const Outcome<B>& b, F&& f) {
  if (!a) return Cell::na(a.reason);
  if (!b) return Cell::na(b.reason);
  try {
    return Cell::of(f(*a, *b));
  } catch (const Error& e) {
    return Cell::na(e.reason());
  }
}

template <typename T>
Cell cell_of(const Outcome<T>& v) {
  return v ? Cell::of(static_cast<double>(*v)) : Cell::na(v.reason);
}

std::filesystem::path normalized(const std::filesystem::path& p) {
  return p.lexically_normal();
}

ClusterAssignment read_assignment_file(const std::filesystem::path& path, const Graph& g,
                                       const std::string& id) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  auto c = load_assignment(in, g);
  c.method = "external:" + id;
  return c;
}

std::optional<std::filesystem::path> assignment_for(const ExternalClustering& ext,
                                                    const std::filesystem::path* graph_file) {
  if (!graph_file) return std::nullopt;
  const auto key = normalized(*graph_file);
  for (const auto& [graph, labels] : ext.by_graph) {
    if (normalized(graph) == key) return labels;
  }
  return std::nullopt;
}

}  // namespace

struct GraphProfile {
  const Graph* graph = nullptr;
  Outcome<DistanceSummary> distances;
  Outcome<ScalarMetricResult> avg_dist;
  Outcome<double> clustering;
  Outcome<double> transitivity;
  Outcome<double> lambda1;
  Outcome<Eigen::VectorXd> betweenness;
  Outcome<Eigen::VectorXd> closeness;
  Outcome<Eigen::VectorXd> degree_centrality;
  Outcome<Eigen::VectorXd> pagerank;
  Outcome<std::vector<std::uint32_t>> eccentricity;
  std::vector<std::pair<std::string, Outcome<ClusterAssignment>>> clusterings;
};

namespace {

bool selected(const ScenarioConfig& cfg, std::string_view id) {
  return std::find(cfg.metrics.begin(), cfg.metrics.end(), id) != cfg.metrics.end();
}

GraphProfile build_profile(const Graph& g, const ScenarioConfig& cfg) {
  GraphProfile p;
  p.graph = &g;
  const bool need_distances = selected(cfg, metric_id::kAvgDist) ||
                              selected(cfg, metric_id::kCloseness) ||
                              selected(cfg, metric_id::kFrv);
  if (need_distances) {
    p.distances = capture([&] { return distance_summary(g); });
    auto from_summary = [&](auto f) {
      return p.distances ? capture([&] { return f(*p.distances); })
                         : decltype(capture([&] { return f(*p.distances); })){std::nullopt,
                                                                               p.distances.reason};
    };
    if (selected(cfg, metric_id::kAvgDist)) {
      p.avg_dist = from_summary([](const DistanceSummary& s) { return average_distance(s); });
    }
    if (selected(cfg, metric_id::kCloseness)) {
      p.closeness = from_summary([](const DistanceSummary& s) { return closeness(s).values; });
    }
    if (selected(cfg, metric_id::kFrv)) {
      p.eccentricity = from_summary([&](const DistanceSummary& s) {
        if (s.eccentricity.empty()) throw UndefinedMetric("eccentricity of an empty graph");
        return s.eccentricity;
      });
    }
  }
  if (selected(cfg, metric_id::kClustering)) {
    p.clustering = capture([&] { return clustering_coefficient(g).value; });
  }
  if (selected(cfg, metric_id::kTransitivity)) {
    p.transitivity = capture([&] { return transitivity(g).value; });
  }
  if (selected(cfg, metric_id::kLambda1)) {
    p.lambda1 = capture([&] { return lambda1<double>(g, cfg.lambda_tol, cfg.lambda_max_iter).lambda1; });
  }
  if (selected(cfg, metric_id::kBetweenness)) {
    p.betweenness = capture([&] { return betweenness(g).values; });
  }
  if (selected(cfg, metric_id::kDegreeCentrality)) {
    p.degree_centrality = capture([&] { return degree_centrality(g).values; });
  }
  if (selected(cfg, metric_id::kPagerank) || selected(cfg, metric_id::kRrti)) {
    p.pagerank = capture([&] { return pagerank(g, cfg.pagerank).scores; });
  }
  if (selected(cfg, "precision")) {
    for (const auto& method : cfg.clustering) {
      if (method == "multilevel") {
        p.clusterings.emplace_back(method,
                                   capture([&] { return cluster_multilevel(g, cfg.cluster_seed); }));
      } else if (method == "fastgreedy") {
        p.clusterings.emplace_back(method, capture([&] { return cluster_fastgreedy(g); }));
      }
    }
  }
  return p;
}

}  // namespace

Evaluator::Evaluator(const Graph& original, const ScenarioConfig& cfg)
    : original_(original),
      cfg_(cfg),
      profile_(std::make_unique<GraphProfile>(build_profile(original, cfg))) {}

Evaluator::~Evaluator() = default;

RunMeasurement Evaluator::measure_original() const {
  return compare(*profile_, BudgetInfo{}, cfg_.original.empty() ? nullptr : &cfg_.original);
}

RunMeasurement Evaluator::measure(const Graph& anonymized, const BudgetInfo& budget,
                                  const std::filesystem::path* source) const {
  require_same_vertex_set(original_, anonymized);
  const GraphProfile anon = build_profile(anonymized, cfg_);
  return compare(anon, budget, source);
}

RunMeasurement Evaluator::compare(const GraphProfile& anon, const BudgetInfo& budget,
                                  const std::filesystem::path* source) const {
  const GraphProfile& orig = *profile_;
  const Graph& h = *anon.graph;
  RunMeasurement out;
  auto emit = [&](std::string id, Cell c) { out.cells.emplace_back(std::move(id), std::move(c)); };
  auto scalar_rows = [&](std::string_view id, const auto& a, const auto& b) {
    emit(std::string(id), cell_of(b));
    emit(std::string(id) + ".err", combine(a, b, [](double x, double y) { return std::abs(x - y); }));
  };
  auto vector_row = [&](std::string_view id, const Outcome<Eigen::VectorXd>& a,
                        const Outcome<Eigen::VectorXd>& b) {
    emit(std::string(id), combine(a, b, [](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
           return rms_difference(x, y);
         }));
  };
  auto value_of = [](const Outcome<ScalarMetricResult>& r) {
    return r ? Outcome<double>{r.value->value, {}} : Outcome<double>{std::nullopt, r.reason};
  };

  for (const auto& id : registered_metrics()) {
    if (!selected(cfg_, id)) continue;
    if (id == metric_id::kAvgDist) {
      scalar_rows(id, value_of(orig.avg_dist), value_of(anon.avg_dist));
      if (anon.avg_dist && anon.avg_dist.value->unreachable_pairs > 0) {
        out.warnings.push_back("avg_dist excludes unreachable vertex pairs");
      }
    } else if (id == metric_id::kClustering) {
      scalar_rows(id, orig.clustering, anon.clustering);
    } else if (id == metric_id::kTransitivity) {
      scalar_rows(id, orig.transitivity, anon.transitivity);
    } else if (id == metric_id::kEdgeIntersection) {
      const auto ei = capture([&] { return edge_intersection(original_, h).value; });
      emit(id, cell_of(ei));
    } else if (id == metric_id::kBetweenness) {
      vector_row(id, orig.betweenness, anon.betweenness);
    } else if (id == metric_id::kCloseness) {
      vector_row(id, orig.closeness, anon.closeness);
    } else if (id == metric_id::kDegreeCentrality) {
      vector_row(id, orig.degree_centrality, anon.degree_centrality);
    } else if (id == metric_id::kLambda1) {
      scalar_rows(id, orig.lambda1, anon.lambda1);
    } else if (id == metric_id::kPagerank) {
      vector_row(id, orig.pagerank, anon.pagerank);
    } else if (id == metric_id::kRrti) {
      emit(id, combine(orig.pagerank, anon.pagerank,
                       [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
                         return rrti(a, b, cfg_.top_x);
                       }));
    } else if (id == metric_id::kFrv) {
      emit(id, combine(orig.eccentricity, anon.eccentricity,
                       [](const auto& a, const auto& b) { return frv(a, b); }));
    } else if (id == "precision") {
      auto precision_rows = [&](const std::string& method, const Outcome<ClusterAssignment>& truth,
                                const Outcome<ClusterAssignment>& pred) {
        const auto score = combine(truth, pred, [](const auto& t, const auto& p) {
          return precision_index(t, p).precision;
        });
        emit("precision:" + method, score);
        emit("precision_loss:" + method,
             score.value ? Cell::of(1.0 - *score.value) : Cell::na(score.na_reason));
        if (pred && pred.value->q == pred.value->size() && pred.value->size() > 1) {
          out.warnings.push_back("precision:" + method +
                                 " predicted clustering is all singletons");
        }
      };
      for (std::size_t i = 0; i < orig.clusterings.size(); ++i) {
        precision_rows(orig.clusterings[i].first, orig.clusterings[i].second,
                       anon.clusterings[i].second);
      }
      for (const auto& ext : cfg_.external_clustering) {
        auto load = [&](const std::filesystem::path* file, const Graph& g) {
          const auto labels = assignment_for(ext, file);
          if (!labels) {
            return Outcome<ClusterAssignment>{std::nullopt, "missing-assignment"};
          }
          return capture([&] { return read_assignment_file(*labels, g, ext.id); });
        };
        const std::filesystem::path* orig_file = cfg_.original.empty() ? nullptr : &cfg_.original;
        precision_rows("external:" + ext.id, load(orig_file, original_), load(source, h));
      }
    } else if (id == metric_id::kDegChanged) {
      emit(id, Cell::of(static_cast<double>(degree_change_count(original_, h))));
    } else if (id == metric_id::kNeighChanged) {
      emit(id, Cell::of(neighborhood_change(original_, h)));
    }
  }

  if (selected(cfg_, metric_id::kCandH1) || selected(cfg_, metric_id::kPossibleWorlds)) {
    CandidateRun run;
    run.w = budget.w;
    run.w_estimated = budget.estimated;
    const auto m = original_.num_edges();
    const auto comp = complement_size(original_);
    try {
      const auto bounds = degree_bounds(h, budget.w, m, comp, budget.mode);
      const auto degrees = original_.degrees();
      const auto profile = candidate_sets(degrees, bounds);
      for (std::size_t b = 0; b < run.buckets.size(); ++b) {
        run.buckets[b] = static_cast<double>(profile.buckets[b]);
      }
    } catch (const Error& e) {
      run.na_reason = e.reason();
    }
    run.possible_worlds = possible_worlds(m, comp, budget.w).str();
    out.candidates = std::move(run);
  }
  return out;
}

BudgetInfo budget_from_diff(const Graph& original, const Graph& anonymized,
                            std::optional<std::size_t> w_override) {
  const auto diff = edge_diff(original, anonymized);
  BudgetInfo b;
  b.mode = infer_mode(diff);
  if (w_override) {
    b.w = *w_override;
  } else {
    b.w = diff.only_original + diff.only_anon;
    b.estimated = true;
  }
  return b;
}

namespace {

RunReport fold(std::vector<RunMeasurement>& runs, std::string series, std::string label,
               double x) {
  RunReport report;
  report.series = std::move(series);
  report.label = std::move(label);
  report.x = x;
  std::set<std::string> seen_warnings;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    auto& run = runs[r];
    for (std::size_t i = 0; i < run.cells.size(); ++i) {
      if (r == 0) report.metrics.push_back({run.cells[i].first, {}});
      report.metrics[i].runs.push_back(std::move(run.cells[i].second));
    }
    if (run.candidates) report.candidates.push_back(std::move(*run.candidates));
    for (auto& w : run.warnings) {
      if (seen_warnings.insert(w).second) report.warnings.push_back(std::move(w));
    }
  }
  return report;
}

}  // namespace

RunReport evaluate_input(const Evaluator& evaluator, const ScenarioConfig& cfg,
                         const AnonInput& input, std::string series, double x,
                         const Logger& log) {
  const Graph& original = evaluator.original();
  const std::size_t runs = input.runs();
  if (runs == 0) throw ConfigError("input '" + input.label + "' has no runs");
  std::vector<RunMeasurement> measured(runs);
  std::vector<std::string> notes(runs);

  parallel_tasks(runs, [&](std::size_t r) {
    if (input.perturbation) {
      const auto& spec = *input.perturbation;
      const Graph h = perturb(original, spec, r);
      if (cfg.write_perturbed) {
        const auto dir = cfg.out_dir / "graphs";
        std::filesystem::create_directories(dir);
        write_edge_list_file(dir / perturbed_file_name(cfg.original_label, spec, r), h);
      }
      const BudgetInfo budget{derive_budget(original.num_edges(), spec.percentage), false,
                              spec.method};
      measured[r] = evaluator.measure(h, budget);
    } else {
      const auto& file = input.files[r];
      ParseOptions options;
      options.ignore_extra_columns = cfg.ignore_extra_columns;
      options.reference = &original;
      LoadStats stats;
      const Graph h = load_graph_file(file, options, &stats);
      if (stats.self_loops + stats.duplicates > 0) {
        notes[r] = file.string() + ": dropped " + std::to_string(stats.self_loops) +
                   " self-loops and " + std::to_string(stats.duplicates) + " duplicate edges";
      }
      measured[r] = evaluator.measure(h, budget_from_diff(original, h, cfg.w_override), &file);
    }
  });
  if (log) {
    for (const auto& note : notes) {
      if (!note.empty()) log(note);
    }
  }
  return fold(measured, std::move(series), input.label, x);
}

ReportSet run_scenario(const ScenarioConfig& cfg, const Graph& original, const Logger& log) {
  validate(cfg);
  const Evaluator evaluator(original, cfg);

  ReportSet set;
  set.scenario = cfg.scenario;
  set.config = config_to_json(cfg);
  set.ci_quantile = cfg.ci_quantile;

  std::vector<RunMeasurement> self{evaluator.measure_original()};
  set.reports.push_back(fold(self, "", cfg.original_label, 0.0));

  for (const auto& sequence : cfg.sequences) {
    const std::string series = cfg.scenario == 3 ? sequence.label : std::string();
    for (std::size_t i = 0; i < sequence.inputs.size(); ++i) {
      const auto& input = sequence.inputs[i];
      if (log) log("evaluating " + (series.empty() ? "" : series + ":") + input.label);
      const double x = input.x.value_or(static_cast<double>(i + 1));
      set.reports.push_back(evaluate_input(evaluator, cfg, input, series, x, log));
    }
  }
  return set;
}

ReportSet run_scenario(const ScenarioConfig& cfg, const Logger& log) {
  validate(cfg);
  ParseOptions options;
  options.ignore_extra_columns = cfg.ignore_extra_columns;
  LoadStats stats;
  const Graph original = load_graph_file(cfg.original, options, &stats);
  if (log) {
    log("loaded " + cfg.original.string() + ": n=" + std::to_string(original.num_vertices()) +
        " m=" + std::to_string(original.num_edges()) + " (dropped " +
        std::to_string(stats.self_loops) + " self-loops, " + std::to_string(stats.duplicates) +
        " duplicates)");
  }
  return run_scenario(cfg, original, log);
}

ReportSet run_scenario_one(ScenarioConfig cfg, const Logger& log) {
  cfg.scenario = 1;
  return run_scenario(cfg, log);
}

ReportSet run_scenario_two(ScenarioConfig cfg, const Logger& log) {
  cfg.scenario = 2;
  return run_scenario(cfg, log);
}

ReportSet run_scenario_three(ScenarioConfig cfg, const Logger& log) {
  cfg.scenario = 3;
  return run_scenario(cfg, log);
}

}  // namespace anoneval
