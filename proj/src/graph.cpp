#include "anoneval/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <zlib.h>

#include "anoneval/errors.hpp"

namespace anoneval {

namespace {

std::shared_ptr<const std::vector<std::string>> numbered_names(std::size_t n) {
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = std::to_string(i);
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

}  // namespace

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges, std::vector<std::string> names,
                        std::size_t* dropped_self_loops, std::size_t* dropped_duplicates) {
  if (!names.empty() && names.size() != n) {
    throw ArgumentError("name table has " + std::to_string(names.size()) + " entries for " +
                        std::to_string(n) + " vertices");
  }
  Graph g;
  g.names_ = names.empty() ? numbered_names(n)
                           : std::make_shared<const std::vector<std::string>>(std::move(names));
  g = g.with_edges(edges);

  if (dropped_self_loops || dropped_duplicates) {
    std::size_t loops = 0;
    for (const auto& [u, v] : edges) loops += (u == v);
    if (dropped_self_loops) *dropped_self_loops = loops;
    if (dropped_duplicates) *dropped_duplicates = edges.size() - loops - g.m_;
  }
  return g;
}

Graph Graph::with_edges(std::span<const Edge> edges) const {
  const std::size_t n = names_ ? names_->size() : 0;
  Graph g;
  g.names_ = names_;

  std::vector<std::size_t> counts(n + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw ArgumentError("edge endpoint out of range");
    if (u == v) continue;
    ++counts[u + 1];
    ++counts[v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) counts[i + 1] += counts[i];
  std::vector<Vertex> raw(counts[n]);
  std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
  for (const auto& [u, v] : edges) {
    if (u == v) continue;
    raw[cursor[u]++] = v;
    raw[cursor[v]++] = u;
  }

  g.offsets_.assign(n + 1, 0);
  g.adj_.reserve(raw.size());
  for (std::size_t v = 0; v < n; ++v) {
    auto first = raw.begin() + static_cast<std::ptrdiff_t>(counts[v]);
    auto last = raw.begin() + static_cast<std::ptrdiff_t>(counts[v + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    g.adj_.insert(g.adj_.end(), first, last);
    g.offsets_[v + 1] = g.adj_.size();
  }
  g.m_ = g.adj_.size() / 2;
  return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const noexcept {
  if (degree(u) > degree(v)) std::swap(u, v);
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> d(num_vertices());
  for (Vertex v = 0; v < d.size(); ++v) d[v] = degree(v);
  return d;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (Vertex u = 0; u < num_vertices(); ++u) {
    for (Vertex v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph load_graph(std::istream& in, const ParseOptions& options, LoadStats* stats) {
  std::unordered_map<std::string, Vertex> ids;
  std::vector<std::string> names;
  if (options.reference) {
    names = options.reference->names();
    ids.reserve(names.size());
    for (Vertex v = 0; v < names.size(); ++v) ids.emplace(names[v], v);
  }

  auto resolve = [&](std::string&& token, std::size_t line) -> Vertex {
    if (auto it = ids.find(token); it != ids.end()) return it->second;
    if (options.reference) throw ParseError("unknown vertex id '" + token + "'", line);
    const auto id = static_cast<Vertex>(names.size());
    ids.emplace(token, id);
    names.push_back(std::move(token));
    return id;
  };

  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#' || line[start] == '%') continue;

    std::istringstream fields(line);
    std::string a, b, extra;
    fields >> a >> b;
    if (b.empty()) throw ParseError("expected a vertex pair, got one token", lineno);
    if (fields >> extra && !options.ignore_extra_columns) {
      throw ParseError("expected a vertex pair, got more than two tokens", lineno);
    }
    const Vertex u = resolve(std::move(a), lineno);
    const Vertex v = resolve(std::move(b), lineno);
    edges.emplace_back(u, v);
  }
  if (in.bad()) throw IoError("read failure while parsing edge list");

  const std::size_t n = names.size();
  LoadStats local;
  local.lines = lineno;
  Graph g = Graph::from_edges(n, edges, std::move(names), &local.self_loops, &local.duplicates);
  if (g.num_edges() == 0) throw ParseError("edge list contains no edges", 0);
  if (stats) *stats = local;
  return g;
}

Graph load_graph_file(const std::filesystem::path& path, const ParseOptions& options,
                      LoadStats* stats) {
  // gzread passes uncompressed files through unchanged.
  gzFile file = gzopen(path.c_str(), "rb");
  if (!file) throw IoError("cannot open " + path.string());
  std::string contents;
  char buffer[1 << 16];
  int got = 0;
  while ((got = gzread(file, buffer, sizeof buffer)) > 0) {
    contents.append(buffer, static_cast<std::size_t>(got));
  }
  int errnum = Z_OK;
  const char* message = got < 0 ? gzerror(file, &errnum) : nullptr;
  std::string reported = message ? message : "";
  gzclose(file);
  if (got < 0) throw IoError("cannot read " + path.string() + ": " + reported);

  std::istringstream in(std::move(contents));
  try {
    return load_graph(in, options, stats);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# vertices " << g.num_vertices() << " edges " << g.num_edges() << '\n';
  for (const auto& [u, v] : g.edges()) out << g.name(u) << ' ' << g.name(v) << '\n';
}

void write_edge_list_file(const std::filesystem::path& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_edge_list(out, g);
  if (!out) throw IoError("write failure on " + path.string());
}

std::uint32_t bfs_into(const Graph& g, Vertex source, std::vector<std::uint32_t>& dist,
                       std::vector<Vertex>& order) {
  dist.assign(g.num_vertices(), DistanceRow::kUnreachable);
  order.clear();
  order.reserve(g.num_vertices());
  dist[source] = 0;
  order.push_back(source);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const Vertex u = order[head];
    const std::uint32_t next = dist[u] + 1;
    for (Vertex v : g.neighbors(u)) {
      if (dist[v] == DistanceRow::kUnreachable) {
        dist[v] = next;
        order.push_back(v);
      }
    }
  }
  return dist[order.back()];
}

DistanceRow bfs_distances(const Graph& g, Vertex source) {
  if (source >= g.num_vertices()) throw ArgumentError("BFS source out of range");
  DistanceRow row;
  row.source = source;
  std::vector<Vertex> order;
  bfs_into(g, source, row.dist, order);
  return row;
}

std::uint32_t eccentricity(const Graph& g, Vertex source) {
  if (source >= g.num_vertices()) throw ArgumentError("eccentricity source out of range");
  std::vector<std::uint32_t> dist;
  std::vector<Vertex> order;
  return bfs_into(g, source, dist, order);
}

void require_same_vertex_set(const Graph& a, const Graph& b) {
  if (a.num_vertices() != b.num_vertices()) {
    throw IncompatibleGraphs("graphs have different vertex counts (" +
                             std::to_string(a.num_vertices()) + " vs " +
                             std::to_string(b.num_vertices()) + ")");
  }
}

EdgeSetDiff edge_diff(const Graph& original, const Graph& anonymized) {
  require_same_vertex_set(original, anonymized);
  std::size_t common = 0;
  for (Vertex u = 0; u < original.num_vertices(); ++u) {
    const auto a = original.neighbors(u);
    const auto b = anonymized.neighbors(u);
    auto ia = std::upper_bound(a.begin(), a.end(), u);
    auto ib = std::upper_bound(b.begin(), b.end(), u);
    while (ia != a.end() && ib != b.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        ++common;
        ++ia;
        ++ib;
      }
    }
  }
  return {common, original.num_edges() - common, anonymized.num_edges() - common};
}

std::uint64_t complement_size(const Graph& g) {
  const std::uint64_t n = g.num_vertices();
  return n * (n - (n > 0 ? 1 : 0)) / 2 - g.num_edges();
}

}  // namespace anoneval
