#include "hamcond/hamilton.hpp"

#include <algorithm>
#include <numeric>

#include "hamcond/error.hpp"
#include "hamcond/matching.hpp"
#include "hamcond/oracle.hpp"

namespace hamcond {

std::string_view to_string(HamiltonStatus status) noexcept {
  switch (status) {
    case HamiltonStatus::Found: return "found";
    case HamiltonStatus::ObstructionFound: return "obstruction_found";
    case HamiltonStatus::ExactNegative: return "exact_negative";
    case HamiltonStatus::EngineGaveUp: return "engine_gave_up";
  }
  return "unknown";
}

EdgePartition partition_edges(Vertex n, std::span<const Edge> edges, const Parameters& params, Rng& rng) {
  EdgePartition part;
  part.n = n;
  const std::size_t j1 = std::min(params.j1, edges.size());
  const std::uint32_t d_min = params.d_min;

  std::vector<std::uint32_t> tails(n, 0), heads(n, 0);
  part.e1.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(j1));
  for (const Edge& e : part.e1) {
    ++tails[e.tail];
    ++heads[e.head];
  }
  const bool top_up = params.partition_rule == PartitionRule::TopUp;
  for (std::size_t j = j1; j < edges.size(); ++j) {
    const Edge e = edges[j];
    if (tails[e.tail] < d_min || heads[e.head] < d_min) {
      part.e1.push_back(e);
      if (top_up) {
        ++tails[e.tail];
        ++heads[e.head];
      }
    } else if (params.share_late_edges) {
      part.e2.push_back(e);
      part.e3.push_back(e);
    } else if (rng.uniform() < params.e2_share) {
      part.e2.push_back(e);
    } else {
      part.e3.push_back(e);
    }
  }
  part.k2 = peel_core(BipartiteGraph(n, part.e2), params.core_degree);
  part.k3 = peel_core(BipartiteGraph(n, part.e3), params.core_degree);
  return part;
}

bool partition_is_degenerate(const EdgePartition& part) noexcept {
  return part.e2.size() < part.n || part.e3.size() < part.n;
}

EdgePartition phase0_partition(Vertex n, std::span<const Edge> edges, const Parameters& params, Rng& rng) {
  EdgePartition part = partition_edges(n, edges, params, rng);
  if (partition_is_degenerate(part)) {
    throw Error(ErrorCode::PartitionDegenerate, "E2 has " + std::to_string(part.e2.size()) + " and E3 has " +
                                                    std::to_string(part.e3.size()) + " edges, n = " +
                                                    std::to_string(n));
  }
  return part;
}

std::vector<Edge> core_edges(std::span<const Edge> edges, const BipartiteVertexSet& core) {
  std::vector<Edge> out;
  for (const Edge& e : edges) {
    if (core.contains_a(e.tail) && core.contains_b(e.head)) out.push_back(e);
  }
  return out;
}

std::optional<CycleCover> phase1_cycle_cover(Vertex n, std::span<const Edge> e1, Rng& rng) {
  // Maximum matching of the relabelled graph; mapping back gives a uniform
  // perfect matching whenever the algorithm's choice depends only on labels.
  std::vector<Vertex> pi(n);
  std::iota(pi.begin(), pi.end(), Vertex{0});
  rng.shuffle(std::span<Vertex>(pi));
  std::vector<Edge> relabelled;
  relabelled.reserve(e1.size());
  for (const Edge& e : e1) relabelled.push_back({e.tail, pi[e.head]});

  const Matching matching = max_bipartite_matching(BipartiteGraph(n, relabelled));
  if (!matching.is_perfect()) return std::nullopt;

  std::vector<Vertex> inverse(n);
  for (Vertex j = 0; j < n; ++j) inverse[pi[j]] = j;
  std::vector<Vertex> succ(n);
  for (Vertex i = 0; i < n; ++i) succ[i] = inverse[matching.mate_of_a[i]];
  return CycleCover::from_successors(succ);
}

namespace {

// Sorted out-lists of an edge class, for membership and scans.
struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<Vertex> targets;

  Adjacency(Vertex n, std::span<const Edge> edges) : offsets(n + 1, 0), targets(edges.size()) {
    for (const Edge& e : edges) ++offsets[e.tail + 1];
    for (Vertex v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    for (const Edge& e : edges) targets[fill[e.tail]++] = e.head;
    for (Vertex v = 0; v < n; ++v) {
      std::sort(targets.begin() + static_cast<std::ptrdiff_t>(offsets[v]),
                targets.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]));
    }
  }
  std::span<const Vertex> out(Vertex v) const {
    return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
  }
  bool has(Vertex u, Vertex v) const {
    auto list = out(u);
    return std::binary_search(list.begin(), list.end(), v);
  }
};

}  // namespace

std::optional<std::vector<Vertex>> phase3_patch(const CycleCover& cover, std::span<const Edge> k3_edges, Rng& rng,
                                                std::size_t* merges) {
  const auto n = static_cast<Vertex>(cover.vertex_count());
  if (merges) *merges = 0;
  if (cover.cycles.size() <= 1) {
    if (cover.cycles.empty()) return std::vector<Vertex>{};
    return cover.cycles.front();
  }
  const Adjacency adj(n, k3_edges);
  std::vector<Vertex> succ = cover.successors(n);
  std::vector<Vertex> pred(n);
  for (Vertex v = 0; v < n; ++v) pred[succ[v]] = v;

  std::vector<std::vector<Vertex>> cycles = cover.cycles;
  std::vector<std::uint32_t> cid(n);
  auto relabel = [&] {
    std::sort(cycles.begin(), cycles.end(), [](const auto& x, const auto& y) {
      if (x.size() != y.size()) return x.size() > y.size();
      return *std::min_element(x.begin(), x.end()) < *std::min_element(y.begin(), y.end());
    });
    for (std::uint32_t c = 0; c < cycles.size(); ++c) {
      for (Vertex v : cycles[c]) cid[v] = c;
    }
  };

  while (cycles.size() > 1) {
    relabel();
    const auto& l2 = cycles[1];
    bool spliced = false;
    const std::size_t offset = rng.below(l2.size());
    for (std::size_t step = 0; step < l2.size() && !spliced; ++step) {
      const Vertex k = l2[(offset + step) % l2.size()];
      const Vertex l = succ[k];
      for (Vertex j : adj.out(k)) {
        if (cid[j] != 0) continue;
        const Vertex i = pred[j];
        if (!adj.has(i, l)) continue;
        // L1 + L2 + (i,l) + (k,j) - (i,j) - (k,l)
        succ[i] = l;
        pred[l] = i;
        succ[k] = j;
        pred[j] = k;
        spliced = true;
        break;
      }
    }
    if (!spliced) return std::nullopt;
    std::vector<Vertex> merged;
    merged.reserve(cycles[0].size() + cycles[1].size());
    const Vertex start = cycles[0].front();
    Vertex v = start;
    do {
      merged.push_back(v);
      v = succ[v];
    } while (v != start);
    cycles.erase(cycles.begin(), cycles.begin() + 2);
    cycles.push_back(std::move(merged));
    if (merges) ++*merges;
  }
  return cycles.front();
}

HamiltonResult find_hamilton(const Digraph& d, const Parameters& params, Rng& rng, const HamiltonPolicy& policy) {
  const Vertex n = d.vertex_count();
  HamiltonResult result;
  HamiltonTrace& trace = result.trace;
  if (d.min_degree() < 1) throw Error(ErrorCode::InvalidArgument, "find_hamilton needs min in/out-degree >= 1");

  std::vector<Edge> order(d.edges().begin(), d.edges().end());
  for (std::size_t attempt = 0; attempt <= policy.max_restarts; ++attempt) {
    if (attempt > 0) {
      ++trace.restarts;
      rng.shuffle(std::span<Edge>(order));
    }
    AttemptTrace& at = trace.attempts.emplace_back();
    const EdgePartition part = partition_edges(n, order, params, rng);
    at.e1 = part.e1.size();
    at.e2 = part.e2.size();
    at.e3 = part.e3.size();
    at.k2 = part.k2.size();
    at.k3 = part.k3.size();

    auto cover = phase1_cycle_cover(n, part.e1, rng);
    if (!cover) {
      at.failed_phase = "phase1";
      continue;
    }
    at.phase1_cycles = cover->cycles.size();
    // A single cycle needs no further edge classes, so a thin split only
    // matters past this point.
    if (cover->cycles.size() > 1 && partition_is_degenerate(part)) {
      at.failed_phase = "phase0";
      continue;
    }
    const std::vector<Edge> k2_edges = core_edges(part.e2, part.k2);
    const std::vector<Edge> k3_edges = core_edges(part.e3, part.k3);
    at.k2_edges = k2_edges.size();
    at.k3_edges = k3_edges.size();

    auto large = phase2_eliminate_small(*cover, k2_edges, params, rng, &at.phase2);
    if (!large) {
      at.failed_phase = "phase2";
      continue;
    }
    auto cycle = phase3_patch(*large, k3_edges, rng, &at.phase3_merges);
    if (!cycle) {
      at.failed_phase = "phase3";
      continue;
    }
    if (!verify_hamilton_cycle(d, *cycle)) {
      throw std::logic_error("engine produced an invalid Hamilton cycle");
    }
    result.status = HamiltonStatus::Found;
    result.cycle = std::move(*cycle);
    trace.solved_by = "engine";
    return result;
  }

  trace.obstruction_count = detect_obstruction(d);
  if (trace.obstruction_count > 0) {
    result.status = HamiltonStatus::ObstructionFound;
    return result;
  }
  if (policy.exact_fallback && n <= policy.exact_limit) {
    trace.exact_consulted = true;
    ExactResult exact = exact_hamiltonicity(d, policy.exact_budget);
    trace.exact_verdict = std::string(to_string(exact.verdict));
    if (exact.verdict == Verdict::True) {
      if (!verify_hamilton_cycle(d, exact.cycle)) throw std::logic_error("exact oracle returned an invalid cycle");
      result.status = HamiltonStatus::Found;
      result.cycle = std::move(exact.cycle);
      trace.solved_by = "exact";
      return result;
    }
    if (exact.verdict == Verdict::False) {
      result.status = HamiltonStatus::ExactNegative;
      return result;
    }
  }
  result.status = HamiltonStatus::EngineGaveUp;
  return result;
}

}  // namespace hamcond
