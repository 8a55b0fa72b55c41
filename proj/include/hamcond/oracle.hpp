#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "hamcond/graph.hpp"

namespace hamcond {

enum class Verdict { False, True, Unknown };

std::string_view to_string(Verdict verdict) noexcept;

struct ExactResult {
  Verdict verdict = Verdict::Unknown;
  std::vector<Vertex> cycle;  // a witness when verdict == True
  std::uint64_t nodes = 0;    // search nodes (backtracking) or DP states touched
};

inline constexpr Vertex kBitmaskLimit = 24;
inline constexpr std::uint64_t kDefaultExactBudget = 2'000'000;

/// Subset DP over paths from vertex 0. Exact; requires n <= 24.
ExactResult hamiltonicity_bitmask(const Digraph& d);

/// Depth-first extension of a path from vertex 0 with forced-move
/// propagation, reachability and bipartite-matching pruning. Returns
/// Unknown once `budget` search nodes are spent.
ExactResult hamiltonicity_backtrack(const Digraph& d, std::uint64_t budget = kDefaultExactBudget);

/// Bitmask DP for n <= 24, otherwise budgeted backtracking. Unknown means
/// the budget ran out (BudgetExhausted), never "no".
ExactResult exact_hamiltonicity(const Digraph& d, std::uint64_t budget = kDefaultExactBudget);

/// Tries every permutation; n <= 10. Test oracle only.
bool hamiltonicity_brute_force(const Digraph& d);

/// Unordered pairs of in-degree-one vertices sharing their in-neighbour,
/// plus pairs of out-degree-one vertices sharing their out-neighbour.
std::size_t detect_obstruction(const Digraph& d);

inline constexpr std::uint64_t kEnumerationLimit = 10'000'000;

/// C(n(n-1), m); saturates at UINT64_MAX.
std::uint64_t candidate_subset_count(Vertex n, std::size_t m);

/// Calls `visit` on every simple digraph on 0..n-1 with exactly m arcs and
/// min in/out-degree >= 1, in lexicographic order of the sorted arc list.
/// Throws TooLarge when C(n(n-1), m) exceeds kEnumerationLimit.
void enumerate_digraphs(Vertex n, std::size_t m, const std::function<void(const Digraph&)>& visit);

std::vector<Digraph> enumerate_digraphs(Vertex n, std::size_t m);

}  // namespace hamcond
