#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hamcond/graph.hpp"

namespace hamcond {

inline constexpr Vertex kUnmatched = static_cast<Vertex>(-1);

struct Matching {
  std::vector<Vertex> mate_of_a;  // B partner of a_i, or kUnmatched
  std::vector<Vertex> mate_of_b;  // A partner of b_j, or kUnmatched
  std::size_t size = 0;

  [[nodiscard]] bool is_perfect() const noexcept { return size == mate_of_a.size(); }
};

/// Maximum-cardinality matching by Hopcroft-Karp (BFS layering, then
/// vertex-disjoint shortest augmenting paths). Deterministic in the
/// adjacency order of g.
Matching max_bipartite_matching(const BipartiteGraph& g);

}  // namespace hamcond
