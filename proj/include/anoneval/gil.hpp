#pragma once

// Generic information loss measures: structural and spectral properties of a
// single graph, and the error aggregations used to compare two graphs.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "anoneval/errors.hpp"
#include "anoneval/graph.hpp"

namespace anoneval {

namespace metric_id {
inline constexpr std::string_view kAvgDist = "avg_dist";
inline constexpr std::string_view kClustering = "clustering";
inline constexpr std::string_view kTransitivity = "transitivity";
inline constexpr std::string_view kEdgeIntersection = "edge_intersection";
inline constexpr std::string_view kBetweenness = "betweenness";
inline constexpr std::string_view kCloseness = "closeness";
inline constexpr std::string_view kDegreeCentrality = "degree_centrality";
inline constexpr std::string_view kLambda1 = "lambda1";
}  // namespace metric_id

struct ScalarMetricResult {
  std::string id;
  double value = 0.0;
  /// Only meaningful for avg_dist: unordered vertex pairs with no path.
  std::uint64_t unreachable_pairs = 0;
};

struct VectorMetricResult {
  std::string id;
  Eigen::VectorXd values;
};

template <typename Scalar = double>
struct SpectralResult {
  Scalar lambda1 = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigvec;
  std::size_t iterations = 0;
  Scalar residual = 0;
};

/// Per-source results of one BFS from every vertex. Shared by the
/// distance-based measures so a graph is swept only once.
struct DistanceSummary {
  std::vector<std::uint64_t> distance_sum;  // over reachable vertices
  std::vector<std::uint32_t> reachable;     // reachable vertices, including the source
  std::vector<std::uint32_t> eccentricity;  // 0 for isolated vertices
};

DistanceSummary distance_summary(const Graph& g);

/// Mean hop distance over unordered reachable pairs. Unreachable pairs are
/// excluded and counted in unreachable_pairs.
ScalarMetricResult average_distance(const Graph& g);
ScalarMetricResult average_distance(const DistanceSummary& summary);

/// Triangles through each vertex.
std::vector<std::uint64_t> triangle_counts(const Graph& g);

/// Mean local clustering, C(v) = 0 when deg(v) <= 1.
ScalarMetricResult clustering_coefficient(const Graph& g);
/// 3 * triangles / triads.
ScalarMetricResult transitivity(const Graph& g);

/// |E ∩ Ẽ| / max(|E|, |Ẽ|).
ScalarMetricResult edge_intersection(const Graph& original, const Graph& anonymized);

/// Brandes accumulation over ordered (s, t) pairs, scaled by 1/n^2.
VectorMetricResult betweenness(const Graph& g);

/// reachable(v) / sum of distances to reachable vertices; equals
/// n / sum_j d(v, j) on connected graphs. Isolated vertices score 0.
VectorMetricResult closeness(const Graph& g);
VectorMetricResult closeness(const DistanceSummary& summary);

/// deg(v) / m.
VectorMetricResult degree_centrality(const Graph& g);

template <typename Scalar = double>
Eigen::SparseMatrix<Scalar> adjacency_matrix(const Graph& g) {
  using Triplet = Eigen::Triplet<Scalar>;
  std::vector<Triplet> entries;
  entries.reserve(2 * g.num_edges());
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    for (Vertex v : g.neighbors(u)) entries.emplace_back(u, v, Scalar(1));
  }
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::SparseMatrix<Scalar> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

/// Largest adjacency eigenvalue by power iteration on A + I, starting from
/// the all-ones vector. The shift makes the dominant eigenvalue unique for
/// bipartite graphs, whose spectrum is symmetric. Iteration stops once two
/// successive Rayleigh quotients differ by less than `tol` and the residual
/// |A e - lambda e| is at most `tol`.
template <typename Scalar = double>
SpectralResult<Scalar> lambda1(const Graph& g, Scalar tol = Scalar(1e-9),
                               std::size_t max_iter = 10000) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (g.num_edges() == 0) throw UndefinedMetric("lambda1 needs at least one edge");
  const Eigen::SparseMatrix<Scalar> a = adjacency_matrix<Scalar>(g);

  Vector x = Vector::Ones(a.rows()).normalized();
  Vector ax(a.rows());
  SpectralResult<Scalar> result;
  Scalar previous = std::numeric_limits<Scalar>::infinity();
  for (std::size_t it = 1; it <= max_iter; ++it) {
    ax.noalias() = a * x;
    const Scalar estimate = x.dot(ax);
    const Scalar residual = (ax - estimate * x).norm();
    result.lambda1 = estimate;
    result.residual = residual;
    result.iterations = it;
    if (std::abs(estimate - previous) < tol && residual <= tol) {
      result.eigvec = x;
      return result;
    }
    previous = estimate;
    x = (ax + x).normalized();
  }
  throw ConvergenceError("lambda1 did not converge in " + std::to_string(max_iter) + " iterations",
                         static_cast<double>(result.lambda1));
}

/// |a - b| for two results of the same metric.
double scalar_error(const ScalarMetricResult& a, const ScalarMetricResult& b);

/// sqrt(mean((a - b)^2)) of any two equally sized vector expressions.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar rms_difference(const Eigen::MatrixBase<DerivedA>& a,
                                         const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) throw IncompatibleGraphs("vector metrics differ in length");
  if (a.size() == 0) return 0;
  return std::sqrt((a - b).squaredNorm() / static_cast<typename DerivedA::Scalar>(a.size()));
}

/// RMS of per-vertex differences for two results of the same metric.
double vector_rms_error(const VectorMetricResult& a, const VectorMetricResult& b);

}  // namespace anoneval
