#include "anoneval/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "anoneval/errors.hpp"
#include "anoneval/risk.hpp"

namespace anoneval {

double student_t_975(std::size_t df) {
  if (df == 0) throw ArgumentError("t quantile needs at least one degree of freedom");
  const boost::math::students_t dist(static_cast<double>(df));
  return boost::math::quantile(dist, 0.975);
}

Aggregate aggregate(std::span<const double> values, std::optional<double> quantile) {
  if (values.empty()) throw ArgumentError("cannot aggregate an empty sample");
  const auto r = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  Aggregate a;
  a.runs = values.size();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  // Rounding in the sum can push the mean a hair outside the sample range.
  a.mean = std::clamp(sum / r, *lo, *hi);
  if (values.size() < 2) return a;
  if (*lo == *hi) {
    a.ci95 = 0.0;
    return a;
  }

  double ss = 0.0;
  for (double v : values) ss += (v - a.mean) * (v - a.mean);
  const double sd = std::sqrt(ss / (r - 1.0));
  const double q = quantile ? *quantile : student_t_975(values.size() - 1);
  a.ci95 = q * sd / std::sqrt(r);
  return a;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

std::string Cell::to_string() const {
  return value ? format_number(*value) : "NA:" + na_reason;
}

std::size_t RunReport::run_count() const {
  std::size_t r = candidates.size();
  for (const auto& m : metrics) r = std::max(r, m.runs.size());
  return r;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string graph_label(const RunReport& r) {
  return r.series.empty() ? r.label : r.series + ":" + r.label;
}

struct CellSummary {
  std::optional<Aggregate> agg;
  std::string na;  // first failure reason when no run succeeded
};

CellSummary summarize(const std::vector<Cell>& runs, std::optional<double> quantile) {
  std::vector<double> ok;
  std::string first_na;
  for (const auto& c : runs) {
    if (c.value) {
      ok.push_back(*c.value);
    } else if (first_na.empty()) {
      first_na = c.na_reason;
    }
  }
  CellSummary s;
  if (ok.empty()) {
    s.na = first_na.empty() ? "no-runs" : first_na;
  } else {
    s.agg = aggregate(ok, quantile);
  }
  return s;
}

std::vector<Cell> bucket_cells(const RunReport& r, std::size_t bucket) {
  std::vector<Cell> out;
  for (const auto& c : r.candidates) {
    out.push_back(c.na_reason.empty() ? Cell::of(c.buckets[bucket]) : Cell::na(c.na_reason));
  }
  return out;
}

// Metric rows of a report plus its candidate buckets as cand_h1.<column>.
std::vector<MetricRuns> all_rows(const RunReport& r) {
  std::vector<MetricRuns> rows = r.metrics;
  if (!r.candidates.empty()) {
    for (std::size_t b = 0; b < kBucketColumns.size(); ++b) {
      rows.push_back({std::string(metric_id::kCandH1) + "." + std::string(kBucketColumns[b]),
                      bucket_cells(r, b)});
    }
  }
  return rows;
}

}  // namespace

std::string metrics_csv(const ReportSet& set) {
  std::size_t width = 0;
  for (const auto& r : set.reports) width = std::max(width, r.run_count());

  std::ostringstream out;
  out << "graph_label,metric_id,mean,ci95";
  for (std::size_t i = 0; i < width; ++i) out << ",run_" << i;
  out << '\n';
  for (const auto& r : set.reports) {
    for (const auto& row : all_rows(r)) {
      const auto s = summarize(row.runs, set.ci_quantile);
      out << csv_field(graph_label(r)) << ',' << csv_field(row.metric_id) << ',';
      if (s.agg) {
        out << format_number(s.agg->mean) << ',';
        if (s.agg->ci95) out << format_number(*s.agg->ci95);
      } else {
        out << csv_field("NA:" + s.na) << ',';
      }
      for (std::size_t i = 0; i < width; ++i) {
        out << ',';
        if (i < row.runs.size()) out << csv_field(row.runs[i].to_string());
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string candidates_csv(const ReportSet& set) {
  std::ostringstream out;
  out << "graph_label";
  for (auto c : kBucketColumns) out << ',' << c;
  out << ",w,w_estimated,possible_worlds\n";
  for (const auto& r : set.reports) {
    if (r.candidates.empty()) continue;
    out << csv_field(graph_label(r));
    for (std::size_t b = 0; b < kBucketColumns.size(); ++b) {
      const auto s = summarize(bucket_cells(r, b), set.ci_quantile);
      out << ',' << (s.agg ? format_number(s.agg->mean) : csv_field("NA:" + s.na));
    }
    bool same_w = true;
    bool same_worlds = true;
    bool estimated = false;
    double w_sum = 0.0;
    for (const auto& c : r.candidates) {
      same_w = same_w && c.w == r.candidates.front().w;
      same_worlds = same_worlds && c.possible_worlds == r.candidates.front().possible_worlds;
      estimated = estimated || c.w_estimated;
      w_sum += static_cast<double>(c.w);
    }
    out << ','
        << (same_w ? std::to_string(r.candidates.front().w)
                   : format_number(w_sum / static_cast<double>(r.candidates.size())));
    out << ',' << (estimated ? 1 : 0) << ','
        << (same_worlds ? r.candidates.front().possible_worlds : std::string("varies")) << '\n';
  }
  return out.str();
}

std::string plot_csv(const ReportSet& set) {
  std::ostringstream out;
  out << "series,metric_id,x,y,yerr\n";
  const RunReport* anchor = nullptr;
  std::vector<std::string> series;
  std::map<std::string, std::vector<const RunReport*>> members;
  for (const auto& r : set.reports) {
    if (!anchor) {
      anchor = &r;  // the original graph always comes first
      continue;
    }
    if (!members.count(r.series)) series.push_back(r.series);
    members[r.series].push_back(&r);
  }
  if (!anchor) return out.str();

  const auto anchor_rows = all_rows(*anchor);
  for (const auto& name : series) {
    std::vector<const RunReport*> points{anchor};
    points.insert(points.end(), members[name].begin(), members[name].end());
    for (std::size_t m = 0; m < anchor_rows.size(); ++m) {
      const std::string& id = anchor_rows[m].metric_id;
      for (const RunReport* p : points) {
        const auto rows = all_rows(*p);
        const auto it = std::find_if(rows.begin(), rows.end(),
                                     [&](const MetricRuns& row) { return row.metric_id == id; });
        if (it == rows.end()) continue;
        const auto s = summarize(it->runs, set.ci_quantile);
        out << csv_field(name.empty() ? "main" : name) << ',' << csv_field(id) << ','
            << format_number(p->x) << ',';
        if (s.agg) {
          out << format_number(s.agg->mean) << ',' << format_number(s.agg->ci95.value_or(0.0));
        } else {
          out << csv_field("NA:" + s.na) << ',';
        }
        out << '\n';
      }
    }
  }
  return out.str();
}

nlohmann::json to_json(const ReportSet& set) {
  using nlohmann::json;
  json reports = json::array();
  for (const auto& r : set.reports) {
    json metrics = json::array();
    for (const auto& row : all_rows(r)) {
      json runs = json::array();
      for (const auto& c : row.runs) {
        if (c.value) {
          runs.push_back(*c.value);
        } else {
          runs.push_back("NA:" + c.na_reason);
        }
      }
      const auto s = summarize(row.runs, set.ci_quantile);
      json entry = {{"id", row.metric_id}, {"runs", runs}};
      if (s.agg) {
        entry["mean"] = s.agg->mean;
        entry["ci95"] = s.agg->ci95 ? json(*s.agg->ci95) : json(nullptr);
      } else {
        entry["mean"] = "NA:" + s.na;
        entry["ci95"] = nullptr;
      }
      metrics.push_back(std::move(entry));
    }
    json candidates = json::array();
    for (const auto& c : r.candidates) {
      json e = {{"w", c.w}, {"w_estimated", c.w_estimated}, {"possible_worlds", c.possible_worlds}};
      if (!c.na_reason.empty()) e["na"] = c.na_reason;
      for (std::size_t b = 0; b < kBucketColumns.size(); ++b) {
        e[std::string(kBucketColumns[b])] = c.buckets[b];
      }
      candidates.push_back(std::move(e));
    }
    reports.push_back({{"series", r.series},
                       {"label", r.label},
                       {"x", r.x},
                       {"warnings", r.warnings},
                       {"metrics", std::move(metrics)},
                       {"cand_h1", std::move(candidates)}});
  }
  return {{"scenario", set.scenario}, {"config", set.config}, {"reports", std::move(reports)}};
}

std::vector<std::filesystem::path> emit_reports(const ReportSet& set,
                                                const std::vector<std::string>& formats,
                                                const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto write = [&](const std::string& name, const std::string& contents) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << contents;
    if (!out) throw IoError("write failure on " + path.string());
    written.push_back(path);
  };

  const std::string stem = "scenario" + std::to_string(set.scenario);
  for (const auto& format : formats) {
    if (format == "csv") {
      write(stem + "_metrics.csv", metrics_csv(set));
      write(stem + "_candh1.csv", candidates_csv(set));
      if (set.scenario != 1) write(stem + "_plot.csv", plot_csv(set));
    } else if (format == "json") {
      write(stem + ".json", to_json(set).dump(2) + "\n");
    } else {
      throw ConfigError("unknown output format '" + format + "'");
    }
  }
  return written;
}

}  // namespace anoneval
