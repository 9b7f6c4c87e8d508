#include "anoneval/clustering.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "anoneval/errors.hpp"
#include "anoneval/perturbation.hpp"

namespace anoneval {

ClusterAssignment densify(std::span<const std::uint64_t> raw, std::string method) {
  ClusterAssignment out;
  out.method = std::move(method);
  out.labels.resize(raw.size());
  std::unordered_map<std::uint64_t, std::uint32_t> ids;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = ids.emplace(raw[i], static_cast<std::uint32_t>(ids.size()));
    out.labels[i] = it->second;
  }
  out.q = ids.size();
  return out;
}

double modularity(const Graph& g, const ClusterAssignment& c) {
  if (c.size() != g.num_vertices()) throw ArgumentError("assignment does not cover the graph");
  const double two_m = 2.0 * static_cast<double>(g.num_edges());
  if (two_m == 0) throw UndefinedMetric("modularity of a graph without edges");
  std::vector<double> internal(c.q, 0.0), total(c.q, 0.0);
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    total[c.labels[u]] += static_cast<double>(g.degree(u));
    for (Vertex v : g.neighbors(u)) {
      if (c.labels[u] == c.labels[v]) internal[c.labels[u]] += 1.0;
    }
  }
  double q = 0.0;
  for (std::size_t k = 0; k < c.q; ++k) {
    q += internal[k] / two_m - (total[k] / two_m) * (total[k] / two_m);
  }
  return q;
}

namespace {

// Weighted graph used by the multilevel levels. Weights are integers (edge
// counts), so modularity gains can be compared exactly.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> adj;  // no self entries
  std::vector<std::int64_t> self;    // A_ii, i.e. twice the internal edge count
  std::vector<std::int64_t> degree;  // sum_j A_ij including self
  std::int64_t two_m = 0;

  std::size_t size() const { return adj.size(); }
};

LevelGraph level_from(const Graph& g) {
  LevelGraph lg;
  const std::size_t n = g.num_vertices();
  lg.adj.resize(n);
  lg.self.assign(n, 0);
  lg.degree.assign(n, 0);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v : g.neighbors(u)) lg.adj[u].emplace_back(v, 1);
    lg.degree[u] = static_cast<std::int64_t>(g.degree(u));
  }
  lg.two_m = 2 * static_cast<std::int64_t>(g.num_edges());
  return lg;
}

// One round of local moves. Returns the community of every node, renumbered
// densely in node order, and whether anything moved.
bool local_moves(const LevelGraph& lg, std::mt19937_64& rng, std::vector<std::uint32_t>& comm) {
  const std::size_t n = lg.size();
  comm.resize(n);
  std::iota(comm.begin(), comm.end(), 0u);
  std::vector<std::int64_t> tot(lg.degree);

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[uniform_below(rng, i)]);
  }

  std::vector<std::int64_t> link(n, 0);
  std::vector<std::uint32_t> touched;
  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::uint32_t i : order) {
      const std::uint32_t home = comm[i];
      const std::int64_t k = lg.degree[i];
      touched.clear();
      for (const auto& [j, w] : lg.adj[i]) {
        if (link[comm[j]] == 0) touched.push_back(comm[j]);
        link[comm[j]] += w;
      }
      tot[home] -= k;

      // Gain of joining community c, scaled by 2m: 2m * k_in(c) - tot(c) * k.
      auto gain = [&](std::uint32_t c) { return lg.two_m * link[c] - tot[c] * k; };
      std::uint32_t best = home;
      std::int64_t best_gain = gain(home);
      std::sort(touched.begin(), touched.end());
      for (std::uint32_t c : touched) {
        if (c != home && gain(c) > best_gain) {
          best = c;
          best_gain = gain(c);
        }
      }
      tot[best] += k;
      for (const auto& [j, w] : lg.adj[i]) link[comm[j]] = 0;
      if (best != home) {
        comm[i] = best;
        moved = true;
        any_move = true;
      }
    }
  }

  std::vector<std::uint32_t> renumber(n, UINT32_MAX);
  std::uint32_t next = 0;
  for (auto& c : comm) {
    if (renumber[c] == UINT32_MAX) renumber[c] = next++;
    c = renumber[c];
  }
  return any_move;
}

LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm) {
  const std::size_t q = *std::max_element(comm.begin(), comm.end()) + 1;
  LevelGraph out;
  out.adj.resize(q);
  out.self.assign(q, 0);
  out.degree.assign(q, 0);
  out.two_m = lg.two_m;
  std::vector<std::map<std::uint32_t, std::int64_t>> weights(q);
  for (std::size_t i = 0; i < lg.size(); ++i) {
    const std::uint32_t ci = comm[i];
    out.self[ci] += lg.self[i];
    out.degree[ci] += lg.degree[i];
    for (const auto& [j, w] : lg.adj[i]) {
      if (comm[j] == ci) {
        out.self[ci] += w;
      } else {
        weights[ci][comm[j]] += w;
      }
    }
  }
  for (std::size_t c = 0; c < q; ++c) {
    out.adj[c].assign(weights[c].begin(), weights[c].end());
  }
  return out;
}

}  // namespace

ClusterAssignment cluster_multilevel(const Graph& g, std::uint64_t seed) {
  if (g.num_edges() == 0) throw UndefinedMetric("clustering needs at least one edge");
  auto rng = run_stream(seed, 0);
  LevelGraph level = level_from(g);
  std::vector<std::uint64_t> membership(g.num_vertices());
  std::iota(membership.begin(), membership.end(), 0u);

  std::vector<std::uint32_t> comm;
  while (local_moves(level, rng, comm)) {
    for (auto& m : membership) m = comm[m];
    level = aggregate(level, comm);
  }
  return densify(membership, "multilevel");
}

ClusterAssignment cluster_fastgreedy(const Graph& g) {
  if (g.num_edges() == 0) throw UndefinedMetric("clustering needs at least one edge");
  const std::size_t n = g.num_vertices();
  const std::int64_t m = static_cast<std::int64_t>(g.num_edges());

  // All quantities are scaled by 4m^2 so that gains are exact integers:
  // dQ(i, j) * 4m^2 = 4m * w(i, j) - 2 * K(i) * K(j), where w counts edges
  // between the clusters and K is the cluster degree sum.
  std::vector<std::map<std::uint32_t, std::int64_t>> links(n);
  std::vector<std::int64_t> k(n);
  std::vector<char> alive(n, 1);
  __int128 q_scaled = 0;
  for (Vertex u = 0; u < n; ++u) {
    k[u] = static_cast<std::int64_t>(g.degree(u));
    for (Vertex v : g.neighbors(u)) links[u].emplace(v, 1);
    q_scaled -= static_cast<__int128>(k[u]) * k[u];
  }
  auto gain = [&](std::uint32_t i, std::uint32_t j, std::int64_t w) {
    return static_cast<__int128>(4 * m) * w - static_cast<__int128>(2) * k[i] * k[j];
  };

  struct Best {
    bool valid = false;
    __int128 gain = 0;
    std::uint32_t partner = 0;
  };
  // Best partner of each cluster among larger ids only, so each pair is
  // considered once and lexicographic tie-breaking is a plain scan.
  std::vector<Best> best(n);
  auto refresh = [&](std::uint32_t i) {
    Best b;
    for (auto it = links[i].upper_bound(i); it != links[i].end(); ++it) {
      const __int128 d = gain(i, it->first, it->second);
      if (!b.valid || d > b.gain) b = {true, d, it->first};
    }
    best[i] = b;
  };
  for (std::uint32_t i = 0; i < n; ++i) refresh(i);

  // Union-find over the merge history; the dendrogram is cut at the step
  // with the highest modularity.
  std::vector<std::uint32_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0u);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> merges;
  __int128 best_q = q_scaled;
  std::size_t best_step = 0;

  while (true) {
    std::int64_t pick = -1;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (alive[i] && best[i].valid &&
          (pick < 0 || best[i].gain > best[static_cast<std::size_t>(pick)].gain)) {
        pick = i;
      }
    }
    if (pick < 0) break;
    const auto i = static_cast<std::uint32_t>(pick);
    const std::uint32_t j = best[i].partner;  // i < j; j is absorbed into i
    q_scaled += best[i].gain;

    auto absorbed = std::move(links[j]);
    links[j].clear();
    alive[j] = 0;
    links[i].erase(j);
    absorbed.erase(i);
    for (const auto& [c, w] : absorbed) {
      links[i][c] += w;
      links[c].erase(j);
      links[c][i] += w;
    }
    k[i] += k[j];
    best[j].valid = false;
    merges.emplace_back(i, j);
    if (q_scaled > best_q) {
      best_q = q_scaled;
      best_step = merges.size();
    }

    // Only the merged cluster and its neighbours see different gains.
    refresh(i);
    for (const auto& [c, w] : links[i]) refresh(c);
  }

  for (std::size_t s = 0; s < best_step; ++s) parent[merges[s].second] = merges[s].first;
  std::vector<std::uint64_t> root(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint32_t r = v;
    while (parent[r] != r) r = parent[r];
    root[v] = r;
  }
  return densify(root, "fastgreedy");
}

ClusterAssignment load_assignment(std::istream& in, const Graph& g) {
  std::unordered_map<std::string, Vertex> ids;
  ids.reserve(g.num_vertices());
  for (Vertex v = 0; v < g.num_vertices(); ++v) ids.emplace(g.name(v), v);

  std::string method = "external";
  std::vector<std::uint64_t> raw(g.num_vertices(), 0);
  std::vector<char> seen(g.num_vertices(), 0);
  std::unordered_map<std::string, std::uint64_t> label_ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#' || line[start] == '%') {
      const auto key = line.find("method:", start);
      if (key != std::string::npos) {
        std::istringstream rest(line.substr(key + 7));
        std::string id;
        if (rest >> id) method = "external:" + id;
      }
      continue;
    }
    std::istringstream fields(line);
    std::string vertex, label, extra;
    fields >> vertex >> label;
    if (label.empty() || (fields >> extra)) {
      throw ParseError("expected 'vertex label'", lineno);
    }
    const auto it = ids.find(vertex);
    if (it == ids.end()) throw ParseError("unknown vertex id '" + vertex + "'", lineno);
    if (seen[it->second]) throw ParseError("vertex '" + vertex + "' assigned twice", lineno);
    seen[it->second] = 1;
    raw[it->second] = label_ids.emplace(label, label_ids.size()).first->second;
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!seen[v]) throw ParseError("vertex '" + g.name(v) + "' has no cluster label", 0);
  }
  return densify(raw, method);
}

PrecisionScore precision_index(const ClusterAssignment& truth, const ClusterAssignment& predicted) {
  if (truth.size() != predicted.size()) {
    throw IncompatibleGraphs("cluster assignments cover different vertex counts");
  }
  const std::size_t n = truth.size();
  if (n == 0) throw UndefinedMetric("precision index of an empty assignment");

  std::vector<std::map<std::uint32_t, std::size_t>> counts(predicted.q);
  for (std::size_t v = 0; v < n; ++v) ++counts[predicted.labels[v]][truth.labels[v]];

  std::size_t hits = 0;
  for (const auto& cluster : counts) {
    // The hit count is the mode's frequency, whichever tied label is the mode.
    std::size_t mode_count = 0;
    for (const auto& [label, count] : cluster) mode_count = std::max(mode_count, count);
    hits += mode_count;
  }
  PrecisionScore s;
  s.precision = static_cast<double>(hits) / static_cast<double>(n);
  s.loss = 1.0 - s.precision;
  s.degenerate = predicted.q == n;
  return s;
}

}  // namespace anoneval
