#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "anoneval/graph.hpp"

namespace anoneval {

/// Hard partition of the vertex set. Labels are dense: 0..q-1.
struct ClusterAssignment {
  std::vector<std::uint32_t> labels;
  std::string method;
  std::size_t q = 0;

  std::size_t size() const noexcept { return labels.size(); }
};

/// Renumbers arbitrary labels to 0..q-1 in order of first appearance.
ClusterAssignment densify(std::span<const std::uint64_t> raw, std::string method);

/// Newman-Girvan modularity (resolution 1) of a partition.
double modularity(const Graph& g, const ClusterAssignment& c);

/// Multilevel (Louvain) modularity optimisation. Vertices are visited in an
/// order drawn from `seed`, which makes the result reproducible.
ClusterAssignment cluster_multilevel(const Graph& g, std::uint64_t seed);

/// Clauset-Newman-Moore greedy agglomeration: repeatedly join the pair of
/// adjacent clusters with the largest modularity gain (ties go to the
/// lexicographically smallest id pair), then cut the dendrogram at its
/// modularity maximum.
ClusterAssignment cluster_fastgreedy(const Graph& g);

/// Reads "vertex label" lines, with an optional "# method: <id>" header.
/// Vertex tokens are the names used in `g`'s edge list and must cover every
/// vertex exactly once.
ClusterAssignment load_assignment(std::istream& in, const Graph& g);

struct PrecisionScore {
  double precision = 0.0;
  double loss = 1.0;
  /// Every predicted cluster is a singleton, which makes precision 1 trivially.
  bool degenerate = false;
};

/// Fraction of vertices whose true label equals the most frequent true label
/// of their predicted cluster (ties resolved to the smallest label).
PrecisionScore precision_index(const ClusterAssignment& truth, const ClusterAssignment& predicted);

}  // namespace anoneval
