#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "anoneval/graph.hpp"

namespace anoneval {

enum class PerturbMethod { Add, Del, Mix };

/// "add", "del", "mix"; parsing is case-insensitive.
std::string_view method_name(PerturbMethod method) noexcept;
PerturbMethod parse_method(std::string_view text);

struct PerturbationSpec {
  PerturbMethod method = PerturbMethod::Add;
  double percentage = 0.0;  // of the original edge count, in [0, 100]
  std::uint64_t seed = 0;
  std::size_t runs = 1;
};

/// w = round-half-up(percentage / 100 * m).
std::size_t derive_budget(std::size_t m, double percentage);

/// Random edge perturbation of `g` with budget derive_budget(m, percentage).
///
///  - Add: w distinct non-edges, uniformly without replacement.
///  - Del: w distinct edges removed uniformly.
///  - Mix: floor(w/2) deletions, then ceil(w/2) additions drawn from the
///    complement of the original graph (deleted edges are never re-added).
///
/// The result depends only on (g, spec, run_index).
Graph perturb(const Graph& g, const PerturbationSpec& spec, std::size_t run_index);

/// Independent generator for run `run_index` of an experiment seeded with `seed`.
std::mt19937_64 run_stream(std::uint64_t seed, std::uint64_t run_index);

/// Uniform integer in [0, bound) with no modulo bias; bound > 0.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// "<label>_<method><pct>_r<run>.txt", e.g. "infectious_add10_r3.txt".
std::string perturbed_file_name(std::string_view label, const PerturbationSpec& spec,
                                std::size_t run_index);

/// Shortest decimal rendering of a percentage ("10", "2.5").
std::string format_percentage(double percentage);

}  // namespace anoneval
