#include "anoneval/influence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "anoneval/errors.hpp"
#include "anoneval/gil.hpp"

namespace anoneval {

InfluenceScores pagerank(const Graph& g, const PagerankParams& params) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw UndefinedMetric("pagerank of an empty graph");
  if (!(params.damping > 0.0 && params.damping < 1.0)) {
    throw ArgumentError("damping must lie strictly between 0 and 1");
  }
  const auto size = static_cast<Eigen::Index>(n);
  const double d = params.damping;

  Eigen::VectorXd inv_degree(size);
  for (Vertex v = 0; v < n; ++v) {
    inv_degree[v] = g.degree(v) > 0 ? 1.0 / static_cast<double>(g.degree(v)) : 0.0;
  }

  InfluenceScores out;
  out.damping = d;
  Eigen::VectorXd p = Eigen::VectorXd::Constant(size, 1.0 / static_cast<double>(n));
  Eigen::VectorXd next(size);
  for (std::size_t it = 1; it <= params.max_iter; ++it) {
    const Eigen::VectorXd share = p.cwiseProduct(inv_degree);
    double dangling = 0.0;
    for (Vertex v = 0; v < n; ++v) {
      if (g.degree(v) == 0) dangling += p[v];
    }
    const double base = (1.0 - d + d * dangling) / static_cast<double>(n);
    for (Vertex v = 0; v < n; ++v) {
      double in = 0.0;
      for (Vertex u : g.neighbors(v)) in += share[u];
      next[v] = base + d * in;
    }
    const double change = (next - p).lpNorm<1>();
    p.swap(next);
    out.iterations = it;
    if (change < params.tol) {
      out.scores = p / p.sum();
      return out;
    }
  }
  throw ConvergenceError("pagerank did not converge in " + std::to_string(params.max_iter) +
                             " iterations",
                         p.maxCoeff());
}

std::vector<Vertex> top_influential(const Eigen::VectorXd& scores, double x) {
  if (!(x > 0.0 && x <= 1.0)) throw ArgumentError("top fraction must lie in (0, 1]");
  const auto n = static_cast<std::size_t>(scores.size());
  // The small slack keeps e.g. 0.7 * 10 from rounding up to 8.
  const double target = x * static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(target - 1e-9 * std::max(1.0, target)));
  k = std::min(std::max<std::size_t>(k, n > 0 ? 1 : 0), n);

  std::vector<Vertex> ids(n);
  std::iota(ids.begin(), ids.end(), 0u);
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                    [&](Vertex a, Vertex b) {
                      return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
                    });
  ids.resize(k);
  std::sort(ids.begin(), ids.end());
  return ids;
}

double rrti(const Eigen::VectorXd& original_scores, const Eigen::VectorXd& anonymized_scores,
            double x) {
  if (original_scores.size() != anonymized_scores.size()) {
    throw IncompatibleGraphs("score vectors differ in length");
  }
  const auto a = top_influential(original_scores, x);
  const auto b = top_influential(anonymized_scores, x);
  if (a.empty()) throw UndefinedMetric("rrti of an empty graph");
  std::vector<Vertex> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return static_cast<double>(common.size()) / static_cast<double>(a.size());
}

double rrti(const Graph& original, const Graph& anonymized, double x, const PagerankParams& params) {
  require_same_vertex_set(original, anonymized);
  return rrti(pagerank(original, params).scores, pagerank(anonymized, params).scores, x);
}

std::vector<std::uint32_t> eccentricity_vector(const Graph& g) {
  if (g.num_vertices() == 0) throw UndefinedMetric("eccentricity of an empty graph");
  return distance_summary(g).eccentricity;
}

double frv(const std::vector<std::uint32_t>& original,
           const std::vector<std::uint32_t>& anonymized) {
  if (original.size() != anonymized.size()) {
    throw IncompatibleGraphs("eccentricity vectors differ in length");
  }
  if (original.empty()) throw UndefinedMetric("frv of an empty graph");
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    total += original[i] > anonymized[i] ? original[i] - anonymized[i] : anonymized[i] - original[i];
  }
  return static_cast<double>(total) / static_cast<double>(original.size());
}

double frv(const Graph& original, const Graph& anonymized) {
  require_same_vertex_set(original, anonymized);
  return frv(eccentricity_vector(original), eccentricity_vector(anonymized));
}

}  // namespace anoneval
