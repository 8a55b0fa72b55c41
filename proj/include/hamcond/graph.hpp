#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hamcond {

using Vertex = std::uint32_t;

struct Edge {
  Vertex tail = 0;
  Vertex head = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Raw pairing x in [n]^{2m}. Edge j (0-based) is (slots[2j], slots[2j+1]).
/// May contain loops and repeated pairs; the sampler's native object.
struct EdgeSequence {
  Vertex n = 0;
  std::vector<Vertex> slots;

  [[nodiscard]] std::size_t edge_count() const noexcept { return slots.size() / 2; }
  [[nodiscard]] Vertex tail(std::size_t j) const { return slots[2 * j]; }
  [[nodiscard]] Vertex head(std::size_t j) const { return slots[2 * j + 1]; }
  [[nodiscard]] Edge edge(std::size_t j) const { return {tail(j), head(j)}; }

  friend bool operator==(const EdgeSequence&, const EdgeSequence&) = default;
};

std::vector<std::uint32_t> out_degrees(const EdgeSequence& seq);
std::vector<std::uint32_t> in_degrees(const EdgeSequence& seq);
/// d+(v) + d-(v) for every v.
std::vector<std::uint32_t> total_degrees(const EdgeSequence& seq);
/// All in- and out-degrees at least one.
bool in_omega1(const EdgeSequence& seq);

/// Loop positions L and multi-edge positions M, both ascending and 0-based.
struct Defects {
  std::vector<std::size_t> loops;
  std::vector<std::size_t> multis;
  [[nodiscard]] bool empty() const noexcept { return loops.empty() && multis.empty(); }
};

Defects detect_defects(const EdgeSequence& seq);

/// Simple digraph on 0..n-1 with sorted in/out adjacency (CSR) and stored
/// degree tallies. Immutable after construction.
class Digraph {
 public:
  Digraph() = default;

  /// Throws Error{LoopPresent} or Error{ParallelPresent}.
  Digraph(Vertex n, std::vector<Edge> edges);

  [[nodiscard]] Vertex vertex_count() const noexcept { return n_; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edges_.size(); }
  /// Edges in construction order.
  [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }

  [[nodiscard]] std::span<const Vertex> out(Vertex v) const {
    return {out_targets_.data() + out_offsets_[v], out_targets_.data() + out_offsets_[v + 1]};
  }
  [[nodiscard]] std::span<const Vertex> in(Vertex v) const {
    return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
  }
  [[nodiscard]] std::uint32_t out_degree(Vertex v) const { return out_degree_[v]; }
  [[nodiscard]] std::uint32_t in_degree(Vertex v) const { return in_degree_[v]; }
  [[nodiscard]] std::span<const std::uint32_t> out_degrees() const noexcept { return out_degree_; }
  [[nodiscard]] std::span<const std::uint32_t> in_degrees() const noexcept { return in_degree_; }

  [[nodiscard]] bool has_edge(Vertex u, Vertex v) const;
  /// min over v of min(d-(v), d+(v)); 0 for the empty vertex set.
  [[nodiscard]] std::uint32_t min_degree() const noexcept;

  /// Recomputes the degree tallies from adjacency and compares.
  [[nodiscard]] bool tallies_consistent() const;

 private:
  Vertex n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<Vertex> out_targets_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<Vertex> in_sources_;
  std::vector<std::uint32_t> out_degree_;
  std::vector<std::uint32_t> in_degree_;
};

/// Throws LoopPresent / ParallelPresent unless the sequence is simple.
Digraph build_digraph(const EdgeSequence& seq);

/// Bipartite image G(D): a_i -- b_j for every arc (i, j). Side A indexes
/// tails, side B heads; both sides have n vertices.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  BipartiteGraph(Vertex n, std::span<const Edge> edges);

  [[nodiscard]] Vertex side_size() const noexcept { return n_; }
  [[nodiscard]] std::size_t edge_count() const noexcept { return edge_count_; }
  /// B-neighbours of a_i, sorted.
  [[nodiscard]] std::span<const Vertex> neighbors_of_a(Vertex i) const {
    return {a_adj_.data() + a_offsets_[i], a_adj_.data() + a_offsets_[i + 1]};
  }
  /// A-neighbours of b_j, sorted.
  [[nodiscard]] std::span<const Vertex> neighbors_of_b(Vertex j) const {
    return {b_adj_.data() + b_offsets_[j], b_adj_.data() + b_offsets_[j + 1]};
  }
  [[nodiscard]] bool has_edge(Vertex a, Vertex b) const;
  [[nodiscard]] std::uint32_t min_degree() const noexcept;

 private:
  Vertex n_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::size_t> a_offsets_{0};
  std::vector<Vertex> a_adj_;
  std::vector<std::size_t> b_offsets_{0};
  std::vector<Vertex> b_adj_;
};

BipartiteGraph to_bipartite(const Digraph& d);

/// Membership flags for a vertex set of a bipartite graph.
struct BipartiteVertexSet {
  std::vector<std::uint8_t> a;
  std::vector<std::uint8_t> b;

  [[nodiscard]] bool contains_a(Vertex i) const { return a[i] != 0; }
  [[nodiscard]] bool contains_b(Vertex j) const { return b[j] != 0; }
  [[nodiscard]] std::size_t size() const noexcept;
  friend bool operator==(const BipartiteVertexSet&, const BipartiteVertexSet&) = default;
};

/// Maximal vertex set inducing minimum degree >= d_min (the d_min-core).
BipartiteVertexSet peel_core(const BipartiteGraph& g, std::uint32_t d_min);

/// Vertex-disjoint directed cycles covering 0..n-1.
struct CycleCover {
  std::vector<std::vector<Vertex>> cycles;

  /// succ must be a permutation of 0..n-1.
  static CycleCover from_successors(std::span<const Vertex> succ);
  [[nodiscard]] std::vector<Vertex> successors(Vertex n) const;
  [[nodiscard]] std::size_t vertex_count() const noexcept;
  [[nodiscard]] std::size_t min_cycle_length() const noexcept;
};

/// Cycles partition 0..n-1 and every arc of every cycle is in d.
bool is_valid_cycle_cover(const Digraph& d, const CycleCover& cover);

/// True iff `cycle` lists every vertex exactly once and every consecutive
/// pair, including last -> first, is an arc of d.
bool verify_hamilton_cycle(const Digraph& d, std::span<const Vertex> cycle);

}  // namespace hamcond
