#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hamcond/graph.hpp"
#include "hamcond/parameters.hpp"
#include "hamcond/rng.hpp"

namespace hamcond {

/// Phase-0 split of the arcs into E1 (cycle cover), E2 (small-cycle
/// elimination) and E3 (patching), plus the d_min-cores of G2 and G3.
struct EdgePartition {
  Vertex n = 0;
  std::vector<Edge> e1;
  std::vector<Edge> e2;
  std::vector<Edge> e3;
  BipartiteVertexSet k2;
  BipartiteVertexSet k3;
};

/// `edges` in sequence order (the sanitized pairing). Never throws on a
/// thin split; see partition_is_degenerate.
EdgePartition partition_edges(Vertex n, std::span<const Edge> edges, const Parameters& params, Rng& rng);

/// E2 or E3 has fewer than n edges.
bool partition_is_degenerate(const EdgePartition& part) noexcept;

/// partition_edges, throwing PartitionDegenerate on a thin split.
EdgePartition phase0_partition(Vertex n, std::span<const Edge> edges, const Parameters& params, Rng& rng);

/// Edges of `edges` whose tail is in core.a and head in core.b.
std::vector<Edge> core_edges(std::span<const Edge> edges, const BipartiteVertexSet& core);

/// Cycle cover from a uniformly random perfect matching of G(E1), via a
/// uniform relabelling of side B. nullopt when G(E1) has no perfect matching.
std::optional<CycleCover> phase1_cycle_cover(Vertex n, std::span<const Edge> e1, Rng& rng);

struct Phase2Stats {
  std::size_t small_cycles_initial = 0;
  std::size_t eliminated = 0;
  std::size_t broken_edges_tried = 0;
  std::size_t tree_nodes = 0;
  std::size_t premature_closures = 0;
};

/// Eliminates every cycle shorter than params.n0 by rotation trees over the
/// given core edges. nullopt when some small cycle survives all retries.
std::optional<CycleCover> phase2_eliminate_small(const CycleCover& cover, std::span<const Edge> k2_edges,
                                                 const Parameters& params, Rng& rng, Phase2Stats* stats = nullptr);

/// Repeatedly splices the two largest cycles L1, L2 through arcs (i,l),
/// (k,j) of the core edge set, where (i,j) in L1 and (k,l) in L2. Returns
/// the Hamilton cycle, or nullopt when some merge finds no pair.
std::optional<std::vector<Vertex>> phase3_patch(const CycleCover& cover, std::span<const Edge> k3_edges, Rng& rng,
                                                std::size_t* merges = nullptr);

struct HamiltonPolicy {
  std::size_t max_restarts = 3;
  bool exact_fallback = true;
  Vertex exact_limit = 200;
  std::uint64_t exact_budget = 2'000'000;
};

enum class HamiltonStatus {
  Found,
  /// Certified non-Hamiltonian by a degree-one obstruction.
  ObstructionFound,
  /// Certified non-Hamiltonian by the exact oracle (no obstruction present).
  ExactNegative,
  EngineGaveUp,
};

std::string_view to_string(HamiltonStatus status) noexcept;

struct AttemptTrace {
  std::string failed_phase;  // empty when the attempt succeeded
  std::size_t e1 = 0, e2 = 0, e3 = 0;
  std::size_t k2 = 0, k3 = 0;
  std::size_t k2_edges = 0, k3_edges = 0;
  std::size_t phase1_cycles = 0;
  Phase2Stats phase2;
  std::size_t phase3_merges = 0;
};

struct HamiltonTrace {
  std::vector<AttemptTrace> attempts;
  std::size_t restarts = 0;
  std::string solved_by;  // "engine", "exact", or empty
  std::size_t obstruction_count = 0;
  bool exact_consulted = false;
  std::string exact_verdict;  // "true", "false", "unknown" or empty
};

struct HamiltonResult {
  HamiltonStatus status = HamiltonStatus::EngineGaveUp;
  std::vector<Vertex> cycle;
  HamiltonTrace trace;
  [[nodiscard]] bool found() const noexcept { return status == HamiltonStatus::Found; }
};

/// Phases 0-3 with restarts on a fresh partition (edge order reshuffled),
/// then the obstruction check and, for small n, the exact oracle.
/// `d` must be simple with min in/out-degree >= 1.
HamiltonResult find_hamilton(const Digraph& d, const Parameters& params, Rng& rng,
                             const HamiltonPolicy& policy = {});

}  // namespace hamcond
