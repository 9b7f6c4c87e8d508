#pragma once

// Re-identification risk under degree (H1) and 1-neighbourhood background
// knowledge.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "anoneval/graph.hpp"
#include "anoneval/perturbation.hpp"

namespace anoneval {

namespace metric_id {
inline constexpr std::string_view kDegChanged = "deg_changed";
inline constexpr std::string_view kCandH1 = "cand_h1";
inline constexpr std::string_view kNeighChanged = "neigh_changed";
inline constexpr std::string_view kPossibleWorlds = "possible_worlds";
}  // namespace metric_id

/// Candidate-set size ranges: [1], [2,4], [5,10], [11,20], [21,inf).
inline constexpr std::array<std::string_view, 5> kBucketColumns = {"c1", "c2_4", "c5_10", "c11_20",
                                                                   "c21_inf"};

using BigCount = boost::multiprecision::cpp_int;

struct DegreeBounds {
  std::vector<std::size_t> lo;
  std::vector<std::size_t> hi;
};

struct CandidateProfile {
  std::vector<std::size_t> sizes;
  std::array<std::size_t, 5> buckets{};
  std::size_t w = 0;
};

/// Number of vertices whose degree differs between the two graphs.
std::size_t degree_change_count(const Graph& original, const Graph& anonymized);

/// Expected degree interval of every vertex of the released graph `h` after
/// w perturbations of a graph with m_orig edges and comp_orig non-edges:
///   lo = round(deg * (1 - w / m_orig)),  hi = round(deg + (n-1-deg) * w / comp_orig)
/// with round-half-up. Addition pins lo to deg, deletion pins hi to deg; mix
/// applies both formulas with the full w.
DegreeBounds degree_bounds(const Graph& h, std::size_t w, std::size_t m_orig,
                           std::uint64_t comp_orig, PerturbMethod mode);

/// For each target i: |{ j : lo_j <= deg(i) <= hi_j }|, plus the bucket histogram.
CandidateProfile candidate_sets(std::span<const std::size_t> original_degrees,
                                const DegreeBounds& bounds);

/// Bucket index (0..4) of a candidate-set size.
std::size_t bucket_of(std::size_t size) noexcept;

/// C(m, w) * C(comp, w), exactly.
BigCount possible_worlds(std::uint64_t m, std::uint64_t comp, std::uint64_t w);
BigCount binomial(std::uint64_t n, std::uint64_t k);

/// Fraction of vertices whose neighbour set differs between the two graphs.
double neighborhood_change(const Graph& original, const Graph& anonymized);

/// Perturbation mode implied by an edge diff: pure addition, pure deletion or mix.
PerturbMethod infer_mode(const EdgeSetDiff& diff) noexcept;

}  // namespace anoneval
