#include "anoneval/perturbation.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_set>
#include <vector>

#include "anoneval/errors.hpp"

namespace anoneval {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t pair_key(Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

// Removes `count` edges chosen uniformly from `edges` (partial Fisher-Yates);
// the survivors are returned in the tail of the vector.
std::vector<Edge> drop_random_edges(std::vector<Edge> edges, std::size_t count,
                                    std::mt19937_64& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + uniform_below(rng, edges.size() - i);
    std::swap(edges[i], edges[j]);
  }
  edges.erase(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(count));
  return edges;
}

// Draws `count` distinct vertex pairs that are not edges of `g`.
std::vector<Edge> sample_non_edges(const Graph& g, std::size_t count, std::mt19937_64& rng) {
  const std::uint64_t n = g.num_vertices();
  const std::uint64_t available = complement_size(g);
  std::vector<Edge> out;
  out.reserve(count);
  if (count == 0) return out;

  if (2 * count > available) {
    // Dense regime: rejection would stall, so enumerate the complement.
    std::vector<Edge> pool;
    pool.reserve(available);
    for (Vertex u = 0; u < n; ++u) {
      auto nb = g.neighbors(u);
      auto it = std::upper_bound(nb.begin(), nb.end(), u);
      for (Vertex v = u + 1; v < n; ++v) {
        if (it != nb.end() && *it == v) {
          ++it;
          continue;
        }
        pool.emplace_back(u, v);
      }
    }
    for (std::size_t i = 0; i < count; ++i) {
      const auto j = i + uniform_below(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }

  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(count * 2);
  while (out.size() < count) {
    const auto u = static_cast<Vertex>(uniform_below(rng, n));
    const auto v = static_cast<Vertex>(uniform_below(rng, n));
    if (u == v || g.has_edge(u, v)) continue;
    if (!chosen.insert(pair_key(u, v)).second) continue;
    out.emplace_back(std::min(u, v), std::max(u, v));
  }
  return out;
}

}  // namespace

std::string_view method_name(PerturbMethod method) noexcept {
  switch (method) {
    case PerturbMethod::Add: return "add";
    case PerturbMethod::Del: return "del";
    case PerturbMethod::Mix: return "mix";
  }
  return "?";
}

PerturbMethod parse_method(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "add") return PerturbMethod::Add;
  if (lower == "del") return PerturbMethod::Del;
  if (lower == "mix") return PerturbMethod::Mix;
  throw ArgumentError("unknown perturbation method '" + std::string(text) + "'");
}

std::size_t derive_budget(std::size_t m, double percentage) {
  if (!(percentage >= 0.0 && percentage <= 100.0)) {
    throw ArgumentError("perturbation percentage must lie in [0, 100]");
  }
  const double exact = percentage * static_cast<double>(m) / 100.0;
  // Absorb representation error so that e.g. 276.4999999999 still rounds up.
  const double slack = 1e-9 * std::max(1.0, exact);
  return static_cast<std::size_t>(std::floor(exact + 0.5 + slack));
}

std::mt19937_64 run_stream(std::uint64_t seed, std::uint64_t run_index) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(run_index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  // Lemire's multiply-shift with rejection.
  unsigned __int128 product = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

Graph perturb(const Graph& g, const PerturbationSpec& spec, std::size_t run_index) {
  if (spec.runs == 0) throw ArgumentError("perturbation needs at least one run");
  if (run_index >= spec.runs) throw ArgumentError("run index beyond configured run count");
  const std::size_t w = derive_budget(g.num_edges(), spec.percentage);
  const std::size_t m = g.num_edges();
  const std::uint64_t comp = complement_size(g);

  std::size_t deletions = 0;
  std::size_t additions = 0;
  switch (spec.method) {
    case PerturbMethod::Add: additions = w; break;
    case PerturbMethod::Del: deletions = w; break;
    case PerturbMethod::Mix:
      deletions = w / 2;
      additions = w - deletions;
      break;
  }
  if (deletions > m) {
    throw BudgetError("cannot delete " + std::to_string(deletions) + " of " + std::to_string(m) +
                      " edges");
  }
  if (additions > comp) {
    throw BudgetError("cannot add " + std::to_string(additions) + " edges: complement has " +
                      std::to_string(comp));
  }

  auto rng = run_stream(spec.seed, run_index);
  std::vector<Edge> edges = g.edges();
  if (deletions > 0) edges = drop_random_edges(std::move(edges), deletions, rng);
  if (additions > 0) {
    const auto added = sample_non_edges(g, additions, rng);
    edges.insert(edges.end(), added.begin(), added.end());
  }
  return g.with_edges(edges);
}

std::string format_percentage(double percentage) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), percentage);
  return std::string(buf.data(), end);
}

std::string perturbed_file_name(std::string_view label, const PerturbationSpec& spec,
                                std::size_t run_index) {
  return std::string(label) + "_" + std::string(method_name(spec.method)) +
         format_percentage(spec.percentage) + "_r" + std::to_string(run_index) + ".txt";
}

}  // namespace anoneval
