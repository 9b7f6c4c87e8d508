#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace anoneval {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Simple undirected unlabelled graph in compressed sparse row form.
///
/// Vertices are dense ids 0..n-1, every adjacency list is sorted and free of
/// duplicates and self-loops, and u is in adj(v) iff v is in adj(u). The
/// graph is immutable once built, so concurrent readers need no locking.
///
/// Each graph also carries the external name of every vertex (the token used
/// in the file it was loaded from). Perturbed variants share the name table
/// of their source graph.
class Graph {
public:
  Graph() = default;

  /// Builds a graph over `n` vertices. Self-loops are dropped and duplicate
  /// pairs collapsed; `dropped_self_loops` / `dropped_duplicates` receive the
  /// counts when non-null. Empty `names` means "use the decimal vertex id".
  static Graph from_edges(std::size_t n, std::span<const Edge> edges,
                          std::vector<std::string> names = {},
                          std::size_t* dropped_self_loops = nullptr,
                          std::size_t* dropped_duplicates = nullptr);

  /// Same vertex set and names as *this, different edge set.
  Graph with_edges(std::span<const Edge> edges) const;

  std::size_t num_vertices() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return m_; }

  std::span<const Vertex> neighbors(Vertex v) const noexcept {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(Vertex u, Vertex v) const noexcept;

  std::vector<std::size_t> degrees() const;
  /// All edges as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  const std::string& name(Vertex v) const { return (*names_)[v]; }
  const std::vector<std::string>& names() const { return *names_; }

  /// Structural equality: same n and identical adjacency. Names are ignored.
  friend bool operator==(const Graph& a, const Graph& b) noexcept {
    return a.offsets_ == b.offsets_ && a.adj_ == b.adj_;
  }

private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adj_;
  std::size_t m_ = 0;
  std::shared_ptr<const std::vector<std::string>> names_;
};

struct ParseOptions {
  /// Accept lines with more than two tokens and use the first two (KONECT
  /// files carry weight and timestamp columns).
  bool ignore_extra_columns = false;
  /// When set, vertex tokens are resolved against this graph's names rather
  /// than being numbered by first appearance; unknown tokens are an error and
  /// the loaded graph has exactly reference->num_vertices() vertices.
  const Graph* reference = nullptr;
};

struct LoadStats {
  std::size_t lines = 0;
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

/// Parses a whitespace-separated edge list. Lines starting with '#' or '%'
/// are comments. Vertex tokens are arbitrary strings, renumbered 0..n-1 in
/// first-seen order.
Graph load_graph(std::istream& in, const ParseOptions& options = {}, LoadStats* stats = nullptr);

/// File variant of load_graph; gzip-compressed files are decompressed
/// transparently.
Graph load_graph_file(const std::filesystem::path& path, const ParseOptions& options = {},
                      LoadStats* stats = nullptr);

/// Writes "# vertices <n> edges <m>" followed by one "<name> <name>" line per
/// edge. Isolated vertices are only recoverable when reloading against a
/// reference graph.
void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list_file(const std::filesystem::path& path, const Graph& g);

/// Hop counts from one source; unreachable vertices hold kUnreachable.
struct DistanceRow {
  static constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();
  Vertex source = 0;
  std::vector<std::uint32_t> dist;
};

DistanceRow bfs_distances(const Graph& g, Vertex source);

/// Largest finite distance from `source`; 0 for an isolated vertex.
std::uint32_t eccentricity(const Graph& g, Vertex source);

/// BFS into caller-owned buffers, for sweeps over many sources. `dist` is
/// resized to n; `order` receives the visit order. Returns the eccentricity.
std::uint32_t bfs_into(const Graph& g, Vertex source, std::vector<std::uint32_t>& dist,
                       std::vector<Vertex>& order);

struct EdgeSetDiff {
  std::size_t common = 0;
  std::size_t only_original = 0;
  std::size_t only_anon = 0;
};

EdgeSetDiff edge_diff(const Graph& original, const Graph& anonymized);

/// Number of vertex pairs that are not edges: n(n-1)/2 - m.
std::uint64_t complement_size(const Graph& g);

/// Throws IncompatibleGraphs unless both graphs have the same vertex count.
void require_same_vertex_set(const Graph& a, const Graph& b);

}  // namespace anoneval
