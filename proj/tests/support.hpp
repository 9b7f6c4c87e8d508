#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "anoneval/graph.hpp"

namespace testing {

inline anoneval::Graph parse(const std::string& text) {
  std::istringstream in(text);
  return anoneval::load_graph(in);
}

inline anoneval::Graph make(std::size_t n, std::vector<anoneval::Edge> edges) {
  return anoneval::Graph::from_edges(n, edges);
}

inline anoneval::Graph triangle() { return make(3, {{0, 1}, {1, 2}, {0, 2}}); }
inline anoneval::Graph path3() { return make(3, {{0, 1}, {1, 2}}); }

// Erdos-Renyi style graph with a random size and density.
inline anoneval::Graph random_graph(std::mt19937_64& rng, std::size_t min_n, std::size_t max_n) {
  std::uniform_int_distribution<std::size_t> size(min_n, max_n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = size(rng);
  const double p = unit(rng);
  std::vector<anoneval::Edge> edges;
  for (anoneval::Vertex u = 0; u < n; ++u) {
    for (anoneval::Vertex v = u + 1; v < n; ++v) {
      if (unit(rng) < p) edges.emplace_back(u, v);
    }
  }
  return anoneval::Graph::from_edges(n, edges);
}

// Path of the fixture directory, set by the build.
inline std::string fixture(const std::string& name) {
  return std::string(ANONEVAL_FIXTURE_DIR) + "/" + name;
}

}  // namespace testing
