#pragma once

// Influence preservation (top-x PageRank overlap) and information flow
// divergence (farthest reachable vertex).

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "anoneval/graph.hpp"

namespace anoneval {

namespace metric_id {
inline constexpr std::string_view kRrti = "rrti";
inline constexpr std::string_view kFrv = "frv";
inline constexpr std::string_view kPagerank = "pagerank";
}  // namespace metric_id

struct PagerankParams {
  double damping = 0.85;
  double tol = 1e-10;
  std::size_t max_iter = 200;
};

struct InfluenceScores {
  Eigen::VectorXd scores;
  double damping = 0.85;
  std::size_t iterations = 0;
};

/// Undirected PageRank with uniform teleport. The mass of degree-0 vertices
/// is spread uniformly. Converged when the L1 change drops below params.tol.
InfluenceScores pagerank(const Graph& g, const PagerankParams& params = {});

/// Vertices with the ceil(x * n) highest scores, in ascending id order.
/// Ties at the cut-off go to the smaller vertex id.
std::vector<Vertex> top_influential(const Eigen::VectorXd& scores, double x);

/// |top(G) ∩ top(H)| / |top(G)| with top sets taken at fraction x.
double rrti(const Graph& original, const Graph& anonymized, double x,
            const PagerankParams& params = {});
double rrti(const Eigen::VectorXd& original_scores, const Eigen::VectorXd& anonymized_scores,
            double x);

/// Per-vertex eccentricity; isolated vertices get 0.
std::vector<std::uint32_t> eccentricity_vector(const Graph& g);

/// Mean absolute difference of two eccentricity vectors.
double frv(const Graph& original, const Graph& anonymized);
double frv(const std::vector<std::uint32_t>& original, const std::vector<std::uint32_t>& anonymized);

}  // namespace anoneval
