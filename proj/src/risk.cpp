#include "anoneval/risk.hpp"

#include <algorithm>

#include "anoneval/errors.hpp"

namespace anoneval {

namespace {

// round-half-up(num / den) for non-negative integers.
std::uint64_t round_ratio(unsigned __int128 num, unsigned __int128 den) {
  return static_cast<std::uint64_t>((2 * num + den) / (2 * den));
}

}  // namespace

std::size_t degree_change_count(const Graph& original, const Graph& anonymized) {
  require_same_vertex_set(original, anonymized);
  std::size_t changed = 0;
  for (Vertex v = 0; v < original.num_vertices(); ++v) {
    changed += original.degree(v) != anonymized.degree(v);
  }
  return changed;
}

DegreeBounds degree_bounds(const Graph& h, std::size_t w, std::size_t m_orig,
                           std::uint64_t comp_orig, PerturbMethod mode) {
  if (m_orig == 0) throw ArgumentError("degree bounds need an original graph with edges");
  const bool uses_deletion = mode != PerturbMethod::Add;
  const bool uses_addition = mode != PerturbMethod::Del;
  if (uses_deletion && w > m_orig) {
    throw BudgetError("budget " + std::to_string(w) + " exceeds the original edge count");
  }
  if (uses_addition && w > comp_orig) {
    throw BudgetError("budget " + std::to_string(w) + " exceeds the original complement size");
  }

  const std::size_t n = h.num_vertices();
  DegreeBounds b;
  b.lo.resize(n);
  b.hi.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    const std::uint64_t deg = h.degree(v);
    b.lo[v] = uses_deletion && w > 0 ? round_ratio(static_cast<unsigned __int128>(deg) * (m_orig - w), m_orig)
                                     : deg;
    b.hi[v] = uses_addition && w > 0
                  ? deg + round_ratio(static_cast<unsigned __int128>(n - 1 - deg) * w, comp_orig)
                  : deg;
  }
  return b;
}

std::size_t bucket_of(std::size_t size) noexcept {
  if (size <= 1) return 0;
  if (size <= 4) return 1;
  if (size <= 10) return 2;
  if (size <= 20) return 3;
  return 4;
}

CandidateProfile candidate_sets(std::span<const std::size_t> original_degrees,
                                const DegreeBounds& bounds) {
  const std::size_t n = original_degrees.size();
  if (bounds.lo.size() != n || bounds.hi.size() != n) {
    throw IncompatibleGraphs("degree bounds and target degrees differ in length");
  }
  std::vector<std::size_t> lo = bounds.lo;
  std::vector<std::size_t> hi = bounds.hi;
  std::sort(lo.begin(), lo.end());
  std::sort(hi.begin(), hi.end());

  CandidateProfile out;
  out.sizes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t d = original_degrees[i];
    // Intervals with lo > d and with hi < d are disjoint sets since lo <= hi.
    const auto lo_above = static_cast<std::size_t>(lo.end() - std::upper_bound(lo.begin(), lo.end(), d));
    const auto hi_below = static_cast<std::size_t>(std::lower_bound(hi.begin(), hi.end(), d) - hi.begin());
    out.sizes[i] = n - lo_above - hi_below;
    ++out.buckets[bucket_of(out.sizes[i])];
  }
  return out;
}

BigCount binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigCount r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;  // exact: r holds C(n - k + i, i) here
  }
  return r;
}

BigCount possible_worlds(std::uint64_t m, std::uint64_t comp, std::uint64_t w) {
  return binomial(m, w) * binomial(comp, w);
}

double neighborhood_change(const Graph& original, const Graph& anonymized) {
  require_same_vertex_set(original, anonymized);
  const std::size_t n = original.num_vertices();
  if (n == 0) throw UndefinedMetric("neighbourhood change of an empty graph");
  std::size_t changed = 0;
  for (Vertex v = 0; v < n; ++v) {
    const auto a = original.neighbors(v);
    const auto b = anonymized.neighbors(v);
    changed += !std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
  return static_cast<double>(changed) / static_cast<double>(n);
}

PerturbMethod infer_mode(const EdgeSetDiff& diff) noexcept {
  if (diff.only_original == 0) return PerturbMethod::Add;
  if (diff.only_anon == 0) return PerturbMethod::Del;
  return PerturbMethod::Mix;
}

}  // namespace anoneval
