#include "hamcond/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hamcond/error.hpp"

namespace hamcond {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::LoopPresent: return "LoopPresent";
    case ErrorCode::ParallelPresent: return "ParallelPresent";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::AttemptCapExceeded: return "AttemptCapExceeded";
    case ErrorCode::NotParallelPair: return "NotParallelPair";
    case ErrorCode::NotLoop: return "NotLoop";
    case ErrorCode::TargetIsLoop: return "TargetIsLoop";
    case ErrorCode::SanitizeStalled: return "SanitizeStalled";
    case ErrorCode::PartitionDegenerate: return "PartitionDegenerate";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::vector<std::uint32_t> out_degrees(const EdgeSequence& seq) {
  std::vector<std::uint32_t> deg(seq.n, 0);
  for (std::size_t j = 0; j < seq.edge_count(); ++j) ++deg[seq.tail(j)];
  return deg;
}

std::vector<std::uint32_t> in_degrees(const EdgeSequence& seq) {
  std::vector<std::uint32_t> deg(seq.n, 0);
  for (std::size_t j = 0; j < seq.edge_count(); ++j) ++deg[seq.head(j)];
  return deg;
}

std::vector<std::uint32_t> total_degrees(const EdgeSequence& seq) {
  std::vector<std::uint32_t> deg(seq.n, 0);
  for (Vertex v : seq.slots) ++deg[v];
  return deg;
}

bool in_omega1(const EdgeSequence& seq) {
  const auto out = out_degrees(seq);
  const auto in = in_degrees(seq);
  for (Vertex v = 0; v < seq.n; ++v) {
    if (out[v] == 0 || in[v] == 0) return false;
  }
  return true;
}

Defects detect_defects(const EdgeSequence& seq) {
  Defects defects;
  const std::size_t m = seq.edge_count();
  // Bucket edge indices by tail (counting sort keeps index order), then
  // sort each short bucket by head.
  std::vector<std::size_t> offsets(seq.n + 1, 0);
  for (std::size_t j = 0; j < m; ++j) {
    if (seq.tail(j) == seq.head(j)) defects.loops.push_back(j);
    ++offsets[seq.tail(j) + 1];
  }
  for (Vertex v = 0; v < seq.n; ++v) offsets[v + 1] += offsets[v];
  std::vector<std::size_t> order(m);
  {
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    for (std::size_t j = 0; j < m; ++j) order[fill[seq.tail(j)]++] = j;
  }
  for (Vertex v = 0; v < seq.n; ++v) {
    const auto first = order.begin() + static_cast<std::ptrdiff_t>(offsets[v]);
    const auto last = order.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]);
    std::stable_sort(first, last, [&](std::size_t x, std::size_t y) { return seq.head(x) < seq.head(y); });
  }
  for (std::size_t r = 0; r < order.size();) {
    std::size_t s = r + 1;
    while (s < order.size() && seq.edge(order[s]) == seq.edge(order[r])) ++s;
    if (s - r > 1) {
      defects.multis.insert(defects.multis.end(), order.begin() + static_cast<std::ptrdiff_t>(r),
                            order.begin() + static_cast<std::ptrdiff_t>(s));
    }
    r = s;
  }
  std::sort(defects.multis.begin(), defects.multis.end());
  return defects;
}

Digraph::Digraph(Vertex n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  out_degree_.assign(n_, 0);
  in_degree_.assign(n_, 0);
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    const Edge e = edges_[j];
    if (e.tail >= n_ || e.head >= n_) {
      throw Error(ErrorCode::InvalidArgument, "edge " + std::to_string(j) + " has a vertex id >= n");
    }
    if (e.tail == e.head) {
      throw Error(ErrorCode::LoopPresent, "edge " + std::to_string(j) + " is a loop at " +
                                              std::to_string(e.tail));
    }
    ++out_degree_[e.tail];
    ++in_degree_[e.head];
  }

  out_offsets_.assign(n_ + 1, 0);
  in_offsets_.assign(n_ + 1, 0);
  for (Vertex v = 0; v < n_; ++v) {
    out_offsets_[v + 1] = out_offsets_[v] + out_degree_[v];
    in_offsets_[v + 1] = in_offsets_[v] + in_degree_[v];
  }
  out_targets_.resize(edges_.size());
  in_sources_.resize(edges_.size());
  std::vector<std::size_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  for (const Edge e : edges_) {
    out_targets_[out_fill[e.tail]++] = e.head;
    in_sources_[in_fill[e.head]++] = e.tail;
  }
  for (Vertex v = 0; v < n_; ++v) {
    auto first = out_targets_.begin() + static_cast<std::ptrdiff_t>(out_offsets_[v]);
    auto last = out_targets_.begin() + static_cast<std::ptrdiff_t>(out_offsets_[v + 1]);
    std::sort(first, last);
    if (auto dup = std::adjacent_find(first, last); dup != last) {
      throw Error(ErrorCode::ParallelPresent,
                  "edge (" + std::to_string(v) + "," + std::to_string(*dup) + ") is repeated");
    }
    std::sort(in_sources_.begin() + static_cast<std::ptrdiff_t>(in_offsets_[v]),
              in_sources_.begin() + static_cast<std::ptrdiff_t>(in_offsets_[v + 1]));
  }
}

bool Digraph::has_edge(Vertex u, Vertex v) const {
  const auto targets = out(u);
  return std::binary_search(targets.begin(), targets.end(), v);
}

std::uint32_t Digraph::min_degree() const noexcept {
  if (n_ == 0) return 0;
  std::uint32_t best = out_degree_[0];
  for (Vertex v = 0; v < n_; ++v) best = std::min({best, out_degree_[v], in_degree_[v]});
  return best;
}

bool Digraph::tallies_consistent() const {
  for (Vertex v = 0; v < n_; ++v) {
    if (out(v).size() != out_degree_[v] || in(v).size() != in_degree_[v]) return false;
  }
  return std::accumulate(out_degree_.begin(), out_degree_.end(), std::size_t{0}) == edges_.size();
}

Digraph build_digraph(const EdgeSequence& seq) {
  std::vector<Edge> edges;
  edges.reserve(seq.edge_count());
  for (std::size_t j = 0; j < seq.edge_count(); ++j) edges.push_back(seq.edge(j));
  return Digraph(seq.n, std::move(edges));
}

BipartiteGraph::BipartiteGraph(Vertex n, std::span<const Edge> edges)
    : n_(n), edge_count_(edges.size()) {
  a_offsets_.assign(n_ + 1, 0);
  b_offsets_.assign(n_ + 1, 0);
  for (const Edge e : edges) {
    ++a_offsets_[e.tail + 1];
    ++b_offsets_[e.head + 1];
  }
  for (Vertex v = 0; v < n_; ++v) {
    a_offsets_[v + 1] += a_offsets_[v];
    b_offsets_[v + 1] += b_offsets_[v];
  }
  a_adj_.resize(edges.size());
  b_adj_.resize(edges.size());
  std::vector<std::size_t> a_fill(a_offsets_.begin(), a_offsets_.end() - 1);
  std::vector<std::size_t> b_fill(b_offsets_.begin(), b_offsets_.end() - 1);
  for (const Edge e : edges) {
    a_adj_[a_fill[e.tail]++] = e.head;
    b_adj_[b_fill[e.head]++] = e.tail;
  }
  for (Vertex v = 0; v < n_; ++v) {
    std::sort(a_adj_.begin() + static_cast<std::ptrdiff_t>(a_offsets_[v]),
              a_adj_.begin() + static_cast<std::ptrdiff_t>(a_offsets_[v + 1]));
    std::sort(b_adj_.begin() + static_cast<std::ptrdiff_t>(b_offsets_[v]),
              b_adj_.begin() + static_cast<std::ptrdiff_t>(b_offsets_[v + 1]));
  }
}

bool BipartiteGraph::has_edge(Vertex a, Vertex b) const {
  const auto nb = neighbors_of_a(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::uint32_t BipartiteGraph::min_degree() const noexcept {
  if (n_ == 0) return 0;
  std::size_t best = a_offsets_[1] - a_offsets_[0];
  for (Vertex v = 0; v < n_; ++v) {
    best = std::min({best, a_offsets_[v + 1] - a_offsets_[v], b_offsets_[v + 1] - b_offsets_[v]});
  }
  return static_cast<std::uint32_t>(best);
}

BipartiteGraph to_bipartite(const Digraph& d) { return BipartiteGraph(d.vertex_count(), d.edges()); }

std::size_t BipartiteVertexSet::size() const noexcept {
  return static_cast<std::size_t>(std::count(a.begin(), a.end(), 1) + std::count(b.begin(), b.end(), 1));
}

BipartiteVertexSet peel_core(const BipartiteGraph& g, std::uint32_t d_min) {
  const Vertex n = g.side_size();
  BipartiteVertexSet core{std::vector<std::uint8_t>(n, 1), std::vector<std::uint8_t>(n, 1)};
  // Vertex ids: A side 0..n-1, B side n..2n-1.
  std::vector<std::uint32_t> degree(2 * static_cast<std::size_t>(n));
  std::vector<std::uint32_t> queue;
  for (Vertex v = 0; v < n; ++v) {
    degree[v] = static_cast<std::uint32_t>(g.neighbors_of_a(v).size());
    degree[n + v] = static_cast<std::uint32_t>(g.neighbors_of_b(v).size());
  }
  for (std::uint32_t x = 0; x < 2 * n; ++x) {
    if (degree[x] < d_min) queue.push_back(x);
  }
  auto removed = [&](std::uint32_t x) { return x < n ? core.a[x] == 0 : core.b[x - n] == 0; };
  while (!queue.empty()) {
    const std::uint32_t x = queue.back();
    queue.pop_back();
    if (removed(x)) continue;
    if (x < n) {
      core.a[x] = 0;
      for (Vertex j : g.neighbors_of_a(x)) {
        if (!removed(n + j) && --degree[n + j] < d_min) queue.push_back(n + j);
      }
    } else {
      core.b[x - n] = 0;
      for (Vertex i : g.neighbors_of_b(x - n)) {
        if (!removed(i) && --degree[i] < d_min) queue.push_back(i);
      }
    }
  }
  return core;
}

CycleCover CycleCover::from_successors(std::span<const Vertex> succ) {
  const std::size_t n = succ.size();
  std::vector<std::uint8_t> seen(n, 0);
  CycleCover cover;
  for (Vertex start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<Vertex> cycle;
    Vertex v = start;
    while (!seen[v]) {
      seen[v] = 1;
      cycle.push_back(v);
      v = succ[v];
      if (v >= n) throw Error(ErrorCode::InvalidArgument, "successor out of range");
    }
    if (v != start) throw Error(ErrorCode::InvalidArgument, "successor map is not a permutation");
    cover.cycles.push_back(std::move(cycle));
  }
  return cover;
}

std::vector<Vertex> CycleCover::successors(Vertex n) const {
  std::vector<Vertex> succ(n, n);
  for (const auto& cycle : cycles) {
    for (std::size_t i = 0; i < cycle.size(); ++i) succ[cycle[i]] = cycle[(i + 1) % cycle.size()];
  }
  return succ;
}

std::size_t CycleCover::vertex_count() const noexcept {
  std::size_t total = 0;
  for (const auto& c : cycles) total += c.size();
  return total;
}

std::size_t CycleCover::min_cycle_length() const noexcept {
  std::size_t best = 0;
  for (const auto& c : cycles) best = best == 0 ? c.size() : std::min(best, c.size());
  return best;
}

bool is_valid_cycle_cover(const Digraph& d, const CycleCover& cover) {
  const Vertex n = d.vertex_count();
  std::vector<std::uint8_t> seen(n, 0);
  std::size_t covered = 0;
  for (const auto& cycle : cover.cycles) {
    if (cycle.empty()) return false;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const Vertex v = cycle[i];
      if (v >= n || seen[v]) return false;
      seen[v] = 1;
      ++covered;
      if (!d.has_edge(v, cycle[(i + 1) % cycle.size()])) return false;
    }
  }
  return covered == n;
}

bool verify_hamilton_cycle(const Digraph& d, std::span<const Vertex> cycle) {
  const Vertex n = d.vertex_count();
  if (n == 0 || cycle.size() != n) return false;
  std::vector<std::uint8_t> seen(n, 0);
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const Vertex v = cycle[i];
    if (v >= n || seen[v]) return false;
    seen[v] = 1;
    if (!d.has_edge(v, cycle[(i + 1) % cycle.size()])) return false;
  }
  return true;
}

}  // namespace hamcond
