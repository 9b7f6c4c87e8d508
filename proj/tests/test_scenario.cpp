#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "anoneval/config.hpp"
#include "anoneval/errors.hpp"
#include "anoneval/scenario.hpp"
#include "support.hpp"

using namespace anoneval;
namespace fs = std::filesystem;

namespace {

const MetricRuns& row(const RunReport& r, const std::string& id) {
  const auto it = std::find_if(r.metrics.begin(), r.metrics.end(),
                               [&](const MetricRuns& m) { return m.metric_id == id; });
  REQUIRE(it != r.metrics.end());
  return *it;
}

ScenarioConfig base_config(const std::string& original = "p3.txt") {
  ScenarioConfig cfg;
  cfg.original = original;
  cfg.original_label = "p3";
  cfg.metrics = registered_metrics();
  cfg.clustering = registered_clustering_methods();
  return cfg;
}

AnonInput generated(PerturbMethod method, double pct, std::size_t runs, std::uint64_t seed = 7) {
  AnonInput in;
  in.perturbation = PerturbationSpec{method, pct, seed, runs};
  in.label = "gen";
  in.x = pct;
  return in;
}

fs::path write_temp(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "anoneval_scenario_test";
  fs::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("perturbation flags") {
    const auto one = parse_perturb_flag("add:10:10:42", "inf");
    REQUIRE(one.size() == 1);
    CHECK(one[0].label == "inf_add10");
    CHECK(one[0].perturbation->method == PerturbMethod::Add);
    CHECK(one[0].perturbation->runs == 10);
    CHECK(one[0].perturbation->seed == 42);
    CHECK(*one[0].x == 10.0);

    const auto range = parse_perturb_flag("DEL:1..10:2:5", "h");
    REQUIRE(range.size() == 10);
    CHECK(range[9].perturbation->percentage == 10.0);
    CHECK(parse_perturb_flag("mix:1,2.5:1:0", "h")[1].label == "h_mix2.5");

    CHECK_THROWS_AS(parse_perturb_flag("add:10:10", "h"), ConfigError);
    CHECK_THROWS_AS(parse_perturb_flag("swap:10:1:1", "h"), ConfigError);
    CHECK_THROWS_AS(parse_perturb_flag("add:120:1:1", "h"), ConfigError);
    CHECK_THROWS_AS(parse_perturb_flag("add:10:0:1", "h"), ConfigError);
    CHECK_THROWS_AS(parse_perturb_flag("add:x:1:1", "h"), ConfigError);
  }

  TEST_CASE("json manifest") {
    const auto j = nlohmann::json::parse(R"({
      "scenario": 3,
      "original": {"path": "graphs/h.txt", "label": "ham"},
      "sequences": [
        {"label": "Add", "inputs": [{"perturb": "add:1..3:2:9"}]},
        {"label": "Ext", "inputs": ["k2.txt", {"files": ["a.txt", "b.txt"], "label": "k3", "x": 3}]}
      ],
      "metrics": "avg_dist,frv",
      "top_x": 0.1,
      "damping": 0.9,
      "w": 12,
      "format": ["csv"],
      "out": "results"
    })");
    const auto cfg = config_from_json(j, "/base");
    CHECK(cfg.scenario == 3);
    CHECK(cfg.original == fs::path("/base/graphs/h.txt"));
    CHECK(cfg.original_label == "ham");
    REQUIRE(cfg.sequences.size() == 2);
    CHECK(cfg.sequences[0].inputs.size() == 3);
    CHECK(cfg.sequences[1].inputs[0].files[0] == fs::path("/base/k2.txt"));
    CHECK(cfg.sequences[1].inputs[1].runs() == 2);
    CHECK(*cfg.sequences[1].inputs[1].x == 3.0);
    CHECK(cfg.metrics == std::vector<std::string>{"avg_dist", "frv"});
    CHECK(cfg.top_x == 0.1);
    CHECK(cfg.pagerank.damping == 0.9);
    CHECK(*cfg.w_override == 12);
    CHECK(cfg.out_dir == fs::path("/base/results"));
    CHECK_NOTHROW(validate(cfg));

    const auto echoed = config_from_json(config_to_json(cfg), "");
    CHECK(echoed.metrics == cfg.metrics);
    CHECK(echoed.sequences.size() == 2);
  }

  TEST_CASE("malformed manifests are config errors") {
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"scenario": 1})"), ""),
                    ConfigError);
    const auto bad = write_temp("bad.json", "{ not json");
    CHECK_THROWS_AS(load_config_file(bad), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/cfg.json"), ConfigError);
  }

  TEST_CASE("validation") {
    auto cfg = base_config();
    cfg.sequences = {{"s", {generated(PerturbMethod::Add, 10, 1)}}};
    CHECK_NOTHROW(validate(cfg));

    auto empty_metrics = cfg;
    empty_metrics.metrics.clear();
    CHECK_THROWS_AS(validate(empty_metrics), ConfigError);

    auto unknown = cfg;
    unknown.metrics.push_back("diameter");
    CHECK_THROWS_AS(validate(unknown), ConfigError);

    auto one_sequence = cfg;
    one_sequence.scenario = 3;
    CHECK_THROWS_AS(validate(one_sequence), ConfigError);

    auto no_inputs = cfg;
    no_inputs.sequences.clear();
    CHECK_THROWS_AS(validate(no_inputs), ConfigError);

    auto bad_x = cfg;
    bad_x.top_x = 0.0;
    CHECK_THROWS_AS(validate(bad_x), ConfigError);

    auto bad_format = cfg;
    bad_format.formats = {"xml"};
    CHECK_THROWS_AS(validate(bad_format), ConfigError);

    auto bad_method = cfg;
    bad_method.clustering = {"walktrap"};
    CHECK_THROWS_AS(validate(bad_method), ConfigError);
  }
}

TEST_SUITE("scenario") {
  TEST_CASE("a graph compared with itself") {
    const Graph g = testing::parse("0 1\n1 2\n2 0\n2 3\n3 4\n4 5\n5 3\n");
    auto cfg = base_config();
    const Evaluator ev(g, cfg);
    const auto m = ev.measure(g, {0, false, PerturbMethod::Add});
    for (const auto& [id, cell] : m.cells) {
      INFO(id);
      REQUIRE(cell.value.has_value());
      const bool ratio = id == "edge_intersection" || id == "rrti" || id.rfind("precision:", 0) == 0;
      const bool raw = id == "avg_dist" || id == "clustering" || id == "transitivity" ||
                       id == "lambda1";
      if (ratio) {
        CHECK(*cell.value == 1.0);
      } else if (!raw) {
        CHECK(*cell.value == 0.0);
      }
    }
    REQUIRE(m.candidates.has_value());
    CHECK(m.candidates->possible_worlds == "1");
  }

  TEST_CASE("deleting every edge keeps the other cells") {
    auto cfg = base_config();
    cfg.sequences = {{"s", {generated(PerturbMethod::Del, 100, 1)}}};
    const auto set = run_scenario(cfg, testing::path3());
    REQUIRE(set.reports.size() == 2);
    const auto& anon = set.reports[1];
    CHECK(row(anon, "avg_dist").runs[0].to_string() == "NA:undefined-metric");
    CHECK(*row(anon, "edge_intersection").runs[0].value == 0.0);
    CHECK(*row(anon, "deg_changed").runs[0].value == 3.0);
    CHECK(*row(anon, "frv").runs[0].value == doctest::Approx(5.0 / 3.0));
    CHECK(row(anon, "precision:multilevel").runs[0].to_string() == "NA:undefined-metric");
  }

  TEST_CASE("scenario one layout") {
    auto cfg = base_config();
    cfg.sequences = {{"s", {generated(PerturbMethod::Add, 50, 4)}}};
    const auto set = run_scenario(cfg, testing::parse("0 1\n1 2\n2 3\n3 4\n"));
    REQUIRE(set.reports.size() == 2);
    CHECK(set.reports[0].label == "p3");
    CHECK(set.reports[1].run_count() == 4);
    CHECK(set.reports[1].candidates.size() == 4);
    CHECK(set.reports[1].candidates[0].w == 2);
    CHECK_FALSE(set.reports[1].candidates[0].w_estimated);
    CHECK(*row(set.reports[1], "edge_intersection").runs[2].value == 4.0 / 6.0);
  }

  TEST_CASE("file inputs estimate the budget from the edge difference") {
    const auto orig = write_temp("orig.txt", "a b\nb c\nc d\n");
    const auto anon = write_temp("anon.txt", "a b\nb c\nc d\na d\na c\n");
    auto cfg = base_config(orig.string());
    AnonInput in;
    in.files = {anon};
    in.label = "anon";
    cfg.sequences = {{"s", {in}}};
    auto set = run_scenario(cfg);
    CHECK(set.reports[1].candidates[0].w == 2);
    CHECK(set.reports[1].candidates[0].w_estimated);

    cfg.w_override = 1;
    set = run_scenario(cfg);
    CHECK(set.reports[1].candidates[0].w == 1);
    CHECK_FALSE(set.reports[1].candidates[0].w_estimated);
  }

  TEST_CASE("external cluster assignments") {
    const auto orig = write_temp("ext_orig.txt", "0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n2 3\n");
    const auto anon = write_temp("ext_anon.txt", "0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n");
    const auto truth = write_temp("ext_truth.txt", "# method: infomap\n0 a\n1 a\n2 a\n3 b\n4 b\n5 b\n");
    const auto pred = write_temp("ext_pred.txt", "0 x\n1 x\n2 y\n3 y\n4 y\n5 y\n");
    auto cfg = base_config(orig.string());
    cfg.metrics = {"precision"};
    cfg.clustering = {};
    cfg.external_clustering = {{"infomap", {{orig, truth}, {anon, pred}}}};
    AnonInput in;
    in.files = {anon};
    in.label = "anon";
    cfg.sequences = {{"s", {in}}};
    const auto set = run_scenario(cfg);
    CHECK(*row(set.reports[0], "precision:external:infomap").runs[0].value == 1.0);
    CHECK(*row(set.reports[1], "precision:external:infomap").runs[0].value ==
          doctest::Approx(5.0 / 6.0));
  }

  TEST_CASE("mismatched vertex sets are reported") {
    const auto orig = write_temp("mm_orig.txt", "0 1\n1 2\n");
    const auto anon = write_temp("mm_anon.txt", "0 1\n1 9\n");
    auto cfg = base_config(orig.string());
    AnonInput in;
    in.files = {anon};
    in.label = "anon";
    cfg.sequences = {{"s", {in}}};
    CHECK_THROWS_AS(run_scenario(cfg), ParseError);
  }

  TEST_CASE("scenario three needs two sequences") {
    auto cfg = base_config();
    cfg.sequences = {{"Add", {generated(PerturbMethod::Add, 10, 1)}}};
    CHECK_THROWS_AS(run_scenario_three(cfg), ConfigError);
  }

  TEST_CASE("identical sequences give identical series") {
    auto cfg = base_config();
    cfg.scenario = 3;
    const AnonInput in = generated(PerturbMethod::Mix, 20, 3);
    cfg.sequences = {{"A", {in}}, {"B", {in}}};
    std::mt19937_64 rng(70);
    const Graph g = testing::random_graph(rng, 30, 30);
    const auto set = run_scenario(cfg, g);
    REQUIRE(set.reports.size() == 3);
    CHECK(set.reports[1].series == "A");
    CHECK(set.reports[2].series == "B");
    for (std::size_t i = 0; i < set.reports[1].metrics.size(); ++i) {
      CHECK(set.reports[1].metrics[i].runs[0].to_string() ==
            set.reports[2].metrics[i].runs[0].to_string());
    }
  }

  TEST_CASE("a one-element sequence matches scenario one") {
    auto cfg = base_config();
    cfg.sequences = {{"s", {generated(PerturbMethod::Add, 30, 3)}}};
    std::mt19937_64 rng(71);
    const Graph g = testing::random_graph(rng, 25, 25);
    cfg.scenario = 1;
    const auto one = run_scenario(cfg, g);
    cfg.scenario = 2;
    const auto two = run_scenario(cfg, g);
    CHECK(metrics_csv(one) == metrics_csv(two));
  }

  TEST_CASE("scenario two over a deletion sequence") {
    auto cfg = base_config(testing::fixture("karate.txt"));
    cfg.original_label = "karate";
    cfg.metrics = {"edge_intersection", "deg_changed"};
    cfg.sequences = {{"del", parse_perturb_flag("del:2,5,10,20:4:3", "karate")}};
    const auto set = run_scenario_two(cfg);
    REQUIRE(set.reports.size() == 5);
    CHECK(set.scenario == 2);
    const double pct[] = {2, 5, 10, 20};
    std::string expect = "series,metric_id,x,y,yerr\nmain,edge_intersection,0,1,0\n";
    for (std::size_t i = 0; i < 4; ++i) {
      const auto& r = set.reports[i + 1];
      CHECK(r.x == pct[i]);
      const double w = static_cast<double>(derive_budget(78, pct[i]));
      for (const auto& c : row(r, "edge_intersection").runs) CHECK(*c.value == (78 - w) / 78);
      expect += "main,edge_intersection," + format_number(pct[i]) + "," +
                format_number((78 - w) / 78) + ",0\n";
    }
    CHECK(plot_csv(set).rfind(expect, 0) == 0);
  }

  TEST_CASE("repeated runs are byte identical") {
    auto cfg = base_config();
    cfg.scenario = 3;
    cfg.sequences = {{"Add", parse_perturb_flag("add:1..3:3:5", "g")},
                     {"Del", parse_perturb_flag("del:1..3:3:5", "g")}};
    std::mt19937_64 rng(72);
    const Graph g = testing::random_graph(rng, 40, 40);
    const auto a = run_scenario(cfg, g);
    const auto b = run_scenario(cfg, g);
    CHECK(metrics_csv(a) == metrics_csv(b));
    CHECK(candidates_csv(a) == candidates_csv(b));
    CHECK(plot_csv(a) == plot_csv(b));
  }

  TEST_CASE("generated graphs can be written out") {
    const auto out = fs::temp_directory_path() / "anoneval_scenario_written";
    fs::remove_all(out);
    auto cfg = base_config();
    cfg.metrics = {"edge_intersection"};
    cfg.write_perturbed = true;
    cfg.out_dir = out;
    cfg.sequences = {{"s", {generated(PerturbMethod::Add, 50, 2)}}};
    run_scenario(cfg, testing::parse("0 1\n1 2\n2 3\n"));
    CHECK(fs::exists(out / "graphs" / "p3_add50_r0.txt"));
    CHECK(fs::exists(out / "graphs" / "p3_add50_r1.txt"));
    fs::remove_all(out);
  }
}
