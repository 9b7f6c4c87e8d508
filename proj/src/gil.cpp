#include "anoneval/gil.hpp"

#include <algorithm>

#include "anoneval/parallel.hpp"

namespace anoneval {

DistanceSummary distance_summary(const Graph& g) {
  const std::size_t n = g.num_vertices();
  DistanceSummary out;
  out.distance_sum.assign(n, 0);
  out.reachable.assign(n, 0);
  out.eccentricity.assign(n, 0);

  const BlockPartition blocks(n);
  parallel_tasks(blocks.blocks, [&](std::size_t b) {
    std::vector<std::uint32_t> dist;
    std::vector<Vertex> order;
    for (auto s = static_cast<Vertex>(blocks.begin(b)); s < blocks.end(b); ++s) {
      out.eccentricity[s] = bfs_into(g, s, dist, order);
      std::uint64_t sum = 0;
      for (Vertex v : order) sum += dist[v];
      out.distance_sum[s] = sum;
      out.reachable[s] = static_cast<std::uint32_t>(order.size());
    }
  });
  return out;
}

ScalarMetricResult average_distance(const DistanceSummary& summary) {
  const std::uint64_t n = summary.reachable.size();
  if (n < 2) throw UndefinedMetric("average distance needs at least two vertices");
  std::uint64_t total = 0;
  std::uint64_t ordered_pairs = 0;
  for (std::size_t v = 0; v < n; ++v) {
    total += summary.distance_sum[v];
    ordered_pairs += summary.reachable[v] - 1;
  }
  if (ordered_pairs == 0) throw UndefinedMetric("average distance: no connected vertex pair");
  ScalarMetricResult r;
  r.id = metric_id::kAvgDist;
  r.value = static_cast<double>(total) / static_cast<double>(ordered_pairs);
  r.unreachable_pairs = n * (n - 1) / 2 - ordered_pairs / 2;
  return r;
}

ScalarMetricResult average_distance(const Graph& g) {
  if (g.num_vertices() < 2) throw UndefinedMetric("average distance needs at least two vertices");
  return average_distance(distance_summary(g));
}

std::vector<std::uint64_t> triangle_counts(const Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint64_t> tri(n, 0);
  std::vector<char> marked(n, 0);
  for (Vertex u = 0; u < n; ++u) {
    const auto nu = g.neighbors(u);
    for (Vertex v : nu) marked[v] = 1;
    // Each triangle u < v < w is found exactly once, from its smallest vertex.
    for (auto iv = std::upper_bound(nu.begin(), nu.end(), u); iv != nu.end(); ++iv) {
      const Vertex v = *iv;
      const auto nv = g.neighbors(v);
      for (auto iw = std::upper_bound(nv.begin(), nv.end(), v); iw != nv.end(); ++iw) {
        if (marked[*iw]) {
          ++tri[u];
          ++tri[v];
          ++tri[*iw];
        }
      }
    }
    for (Vertex v : nu) marked[v] = 0;
  }
  return tri;
}

ScalarMetricResult clustering_coefficient(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw UndefinedMetric("clustering coefficient of an empty graph");
  const auto tri = triangle_counts(g);
  double sum = 0.0;
  for (Vertex v = 0; v < n; ++v) {
    const double d = static_cast<double>(g.degree(v));
    if (d > 1) sum += 2.0 * static_cast<double>(tri[v]) / (d * (d - 1.0));
  }
  return {std::string(metric_id::kClustering), sum / static_cast<double>(n)};
}

ScalarMetricResult transitivity(const Graph& g) {
  const auto tri = triangle_counts(g);
  std::uint64_t corners = 0;
  std::uint64_t triads = 0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const std::uint64_t d = g.degree(v);
    corners += tri[v];
    triads += d * (d - (d > 0)) / 2;
  }
  if (triads == 0) throw UndefinedMetric("transitivity: graph has no path of length two");
  // corners counts every triangle three times already.
  return {std::string(metric_id::kTransitivity),
          static_cast<double>(corners) / static_cast<double>(triads)};
}

ScalarMetricResult edge_intersection(const Graph& original, const Graph& anonymized) {
  const EdgeSetDiff diff = edge_diff(original, anonymized);
  const std::size_t denom = std::max(original.num_edges(), anonymized.num_edges());
  if (denom == 0) throw UndefinedMetric("edge intersection of two empty edge sets");
  return {std::string(metric_id::kEdgeIntersection),
          static_cast<double>(diff.common) / static_cast<double>(denom)};
}

VectorMetricResult betweenness(const Graph& g) {
  const std::size_t n = g.num_vertices();
  const BlockPartition blocks(n);
  std::vector<std::vector<double>> partial(blocks.blocks, std::vector<double>(n, 0.0));

  parallel_tasks(blocks.blocks, [&](std::size_t b) {
    std::vector<double>& acc = partial[b];
    std::vector<std::uint32_t> dist;
    std::vector<Vertex> order;
    std::vector<double> sigma(n), delta(n);
    for (auto s = static_cast<Vertex>(blocks.begin(b)); s < blocks.end(b); ++s) {
      // Forward phase: BFS with shortest-path counts.
      dist.assign(n, DistanceRow::kUnreachable);
      order.clear();
      std::fill(sigma.begin(), sigma.end(), 0.0);
      dist[s] = 0;
      sigma[s] = 1.0;
      order.push_back(s);
      for (std::size_t head = 0; head < order.size(); ++head) {
        const Vertex u = order[head];
        for (Vertex v : g.neighbors(u)) {
          if (dist[v] == DistanceRow::kUnreachable) {
            dist[v] = dist[u] + 1;
            order.push_back(v);
          }
          if (dist[v] == dist[u] + 1) sigma[v] += sigma[u];
        }
      }
      // Backward phase: dependency accumulation in reverse BFS order.
      for (Vertex v : order) delta[v] = 0.0;
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const Vertex w = *it;
        for (Vertex v : g.neighbors(w)) {
          if (dist[v] != DistanceRow::kUnreachable && dist[v] + 1 == dist[w]) {
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
          }
        }
        if (w != s) acc[w] += delta[w];
      }
    }
  });

  VectorMetricResult r;
  r.id = metric_id::kBetweenness;
  r.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (const auto& acc : partial) {
    r.values += Eigen::Map<const Eigen::VectorXd>(acc.data(), static_cast<Eigen::Index>(n));
  }
  if (n > 0) r.values /= static_cast<double>(n) * static_cast<double>(n);
  return r;
}

VectorMetricResult closeness(const DistanceSummary& summary) {
  const std::size_t n = summary.reachable.size();
  if (n < 2) throw UndefinedMetric("closeness needs at least two vertices");
  VectorMetricResult r;
  r.id = metric_id::kCloseness;
  r.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t v = 0; v < n; ++v) {
    if (summary.distance_sum[v] > 0) {
      r.values[static_cast<Eigen::Index>(v)] = static_cast<double>(summary.reachable[v]) /
                                                static_cast<double>(summary.distance_sum[v]);
    }
  }
  return r;
}

VectorMetricResult closeness(const Graph& g) {
  if (g.num_vertices() < 2) throw UndefinedMetric("closeness needs at least two vertices");
  return closeness(distance_summary(g));
}

VectorMetricResult degree_centrality(const Graph& g) {
  if (g.num_edges() == 0) throw UndefinedMetric("degree centrality needs at least one edge");
  VectorMetricResult r;
  r.id = metric_id::kDegreeCentrality;
  r.values.resize(static_cast<Eigen::Index>(g.num_vertices()));
  const double m = static_cast<double>(g.num_edges());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    r.values[v] = static_cast<double>(g.degree(v)) / m;
  }
  return r;
}

double scalar_error(const ScalarMetricResult& a, const ScalarMetricResult& b) {
  if (a.id != b.id) throw ArgumentError("cannot compare metric " + a.id + " with " + b.id);
  return std::abs(a.value - b.value);
}

double vector_rms_error(const VectorMetricResult& a, const VectorMetricResult& b) {
  if (a.id != b.id) throw ArgumentError("cannot compare metric " + a.id + " with " + b.id);
  return rms_difference(a.values, b.values);
}

}  // namespace anoneval
