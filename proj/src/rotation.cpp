// Phase 2: small-cycle elimination by Out-Phase / In-Phase rotation trees
// over near-permutation digraphs (NPDs).
//
// An NPD is never materialized. Each tree node stores the one or two
// successor changes its basic step made, relative to the current base
// permutation; a query collects the changes along the ancestor chain
// (depth <= 2 i0) and walks the base cycles segment by segment, jumping
// from one modified vertex to the next.

#include <algorithm>
#include <cassert>
#include <limits>

#include "hamcond/error.hpp"
#include "hamcond/hamilton.hpp"

namespace hamcond {
namespace {

constexpr Vertex kNone = std::numeric_limits<Vertex>::max();
constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

struct CoreAdjacency {
  std::vector<std::size_t> out_offsets, in_offsets;
  std::vector<Vertex> out_targets, in_sources;

  CoreAdjacency(Vertex n, std::span<const Edge> edges)
      : out_offsets(n + 1, 0), in_offsets(n + 1, 0), out_targets(edges.size()), in_sources(edges.size()) {
    for (const Edge& e : edges) {
      ++out_offsets[e.tail + 1];
      ++in_offsets[e.head + 1];
    }
    for (Vertex v = 0; v < n; ++v) {
      out_offsets[v + 1] += out_offsets[v];
      in_offsets[v + 1] += in_offsets[v];
    }
    std::vector<std::size_t> of(out_offsets.begin(), out_offsets.end() - 1);
    std::vector<std::size_t> inf(in_offsets.begin(), in_offsets.end() - 1);
    for (const Edge& e : edges) {
      out_targets[of[e.tail]++] = e.head;
      in_sources[inf[e.head]++] = e.tail;
    }
  }
  std::span<const Vertex> out(Vertex v) const {
    return {out_targets.data() + out_offsets[v], out_targets.data() + out_offsets[v + 1]};
  }
  std::span<const Vertex> in(Vertex v) const {
    return {in_sources.data() + in_offsets[v], in_sources.data() + in_offsets[v + 1]};
  }
};

// The current PD Pi, indexed for segment walks.
struct Base {
  std::vector<Vertex> succ, pred;
  std::vector<std::uint32_t> cyc, pos;
  std::vector<std::uint32_t> len;

  explicit Base(const CycleCover& cover) {
    const std::size_t n = cover.vertex_count();
    succ.resize(n);
    pred.resize(n);
    cyc.resize(n);
    pos.resize(n);
    for (std::uint32_t c = 0; c < cover.cycles.size(); ++c) {
      const auto& cycle = cover.cycles[c];
      len.push_back(static_cast<std::uint32_t>(cycle.size()));
      for (std::uint32_t p = 0; p < cycle.size(); ++p) {
        const Vertex v = cycle[p];
        succ[v] = cycle[(p + 1) % cycle.size()];
        pred[succ[v]] = v;
        cyc[v] = c;
        pos[v] = p;
      }
    }
  }
  std::uint32_t forward(Vertex from, Vertex to) const {
    const std::uint32_t l = len[cyc[from]];
    return (pos[to] + l - pos[from]) % l;
  }
};

struct Node {
  std::uint32_t parent = kNoParent;
  Vertex start = 0, end = 0;
  std::size_t length = 0;  // vertices on the path
  // Successor overrides made by this step: (vertex, new successor).
  Vertex v1 = kNone, s1 = kNone;
  Vertex v2 = kNone, s2 = kNone;
};

struct Mod {
  Vertex v, s;
};

class Forest {
 public:
  Forest(const Base& base) : base_(base) {}

  std::vector<Node> nodes;

  // Latest override per vertex along the chain root..id.
  void collect(std::uint32_t id) {
    mods_.clear();
    for (std::uint32_t at = id; at != kNoParent; at = nodes[at].parent) {
      const Node& node = nodes[at];
      if (node.v2 != kNone) add(node.v2, node.s2);
      if (node.v1 != kNone) add(node.v1, node.s1);
    }
  }

  Vertex succ(Vertex y) const {
    for (const Mod& m : mods_) {
      if (m.v == y) return m.s;
    }
    return base_.succ[y];
  }

  Vertex pred(Vertex w) const {
    for (const Mod& m : mods_) {
      if (m.s == w) return m.v;
    }
    const Vertex p = base_.pred[w];
    for (const Mod& m : mods_) {
      if (m.v == p) return kNone;
    }
    return p;
  }

  struct Where {
    bool on_path;
    std::size_t count;  // cycle length, or vertices from w to the path end
  };

  Where locate(Vertex w) const {
    Vertex y = w;
    std::size_t count = 0;
    bool first = true;
    for (;;) {
      const std::uint32_t c = base_.cyc[y];
      std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
      Vertex z = kNone;
      for (const Mod& m : mods_) {
        if (base_.cyc[m.v] != c) continue;
        const std::uint32_t d = base_.forward(y, m.v);
        if (d < best) {
          best = d;
          z = m.v;
        }
      }
      if (!first && base_.cyc[w] == c) {
        const std::uint32_t dw = base_.forward(y, w);
        if (z == kNone || dw <= best) return {false, count + dw};
      }
      if (z == kNone) {
        assert(first);
        return {false, base_.len[c]};
      }
      count += best + 1;
      const Vertex s = succ(z);
      if (s == kNone) return {true, count};
      if (s == w) return {false, count};
      y = s;
      first = false;
    }
  }

  // Successor map of node `id` with the path closed by end -> start.
  std::vector<Vertex> close(std::uint32_t id) {
    std::vector<Vertex> succ_map = base_.succ;
    std::vector<std::uint32_t> chain;
    for (std::uint32_t at = id; at != kNoParent; at = nodes[at].parent) chain.push_back(at);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const Node& node = nodes[*it];
      if (node.v1 != kNone) succ_map[node.v1] = node.s1;
      if (node.v2 != kNone) succ_map[node.v2] = node.s2;
    }
    succ_map[nodes[id].end] = nodes[id].start;
    return succ_map;
  }

 private:
  void add(Vertex v, Vertex s) {
    for (const Mod& m : mods_) {
      if (m.v == v) return;
    }
    mods_.push_back({v, s});
  }

  const Base& base_;
  std::vector<Mod> mods_;
};

// Used-vertex set W with a cheap overlay for per-leaf In-Phase copies.
class UsedSet {
 public:
  explicit UsedSet(std::size_t n) : stamp_(n, 0) {}

  void begin_base() {
    ++epoch_;
    base_epoch_ = epoch_;
    base_size_ = 0;
  }
  void begin_overlay() {
    ++epoch_;
    overlay_size_ = 0;
    overlay_ = true;
  }
  void end_overlay() { overlay_ = false; }

  bool contains(Vertex v) const { return stamp_[v] == base_epoch_ || (overlay_ && stamp_[v] == epoch_); }
  void insert(Vertex v) {
    if (contains(v)) return;
    stamp_[v] = overlay_ ? epoch_ : base_epoch_;
    (overlay_ ? overlay_size_ : base_size_)++;
  }
  std::size_t size() const { return base_size_ + (overlay_ ? overlay_size_ : 0); }

 private:
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0, base_epoch_ = 0;
  std::size_t base_size_ = 0, overlay_size_ = 0;
  bool overlay_ = false;
};

class Eliminator {
 public:
  Eliminator(const CoreAdjacency& adj, const Parameters& params, Phase2Stats* stats, std::size_t n)
      : adj_(adj), params_(params), stats_(stats), used_(n) {}

  // Tries to absorb the cycle through the broken edge (v0, u0) of `cycle`.
  std::optional<std::vector<Vertex>> attempt(const Base& base, Vertex v0, Vertex u0) {
    Forest forest(base);
    used_.begin_base();
    Node root;
    root.start = u0;
    root.end = v0;
    root.length = base.len[base.cyc[v0]];
    root.v1 = v0;
    root.s1 = kNone;
    forest.nodes.push_back(root);

    const std::size_t n0 = params_.n0;
    std::vector<std::uint32_t> level{0};
    for (std::uint32_t depth = 0; depth < params_.i0; ++depth) {
      std::vector<std::uint32_t> next;
      for (std::uint32_t id : level) {
        if (used_.size() >= params_.w_cap) break;
        forest.collect(id);
        const Node node = forest.nodes[id];
        for (Vertex w : adj_.out(node.end)) {
          if (used_.size() >= params_.w_cap) break;
          if (w == node.end) continue;
          if (w == node.start) {
            if (node.length >= n0) {
              if (stats_) {
                ++stats_->premature_closures;
                stats_->tree_nodes += forest.nodes.size();
              }
              return forest.close(id);
            }
            continue;
          }
          const Vertex x = forest.pred(w);
          const bool fresh = !used_.contains(x) && !used_.contains(w);
          used_.insert(node.end);
          used_.insert(w);
          if (!fresh || x == kNone) continue;
          const auto where = forest.locate(w);
          Node child;
          child.parent = id;
          child.start = node.start;
          child.end = x;
          child.v1 = node.end;
          child.s1 = w;
          child.v2 = x;
          child.s2 = kNone;
          if (where.on_path) {
            // Case 2: w..v closes into a cycle, u0..x stays the path.
            if (where.count < n0 || node.length - where.count < n0) continue;
            child.length = node.length - where.count;
          } else {
            // Case 1: w's cycle is absorbed, the path now ends at x.
            child.length = node.length + where.count;
          }
          next.push_back(static_cast<std::uint32_t>(forest.nodes.size()));
          forest.nodes.push_back(child);
          if (next.size() >= params_.nu) break;
        }
        if (next.size() >= params_.nu) break;
      }
      if (next.empty()) break;
      level = std::move(next);
      if (level.size() >= params_.nu) break;
    }
    std::optional<std::vector<Vertex>> closed;
    for (std::uint32_t leaf : level) {
      if ((closed = in_phase(forest, leaf))) break;
    }
    if (stats_) stats_->tree_nodes += forest.nodes.size();
    return closed;
  }

 private:
  std::optional<std::vector<Vertex>> in_phase(Forest& forest, std::uint32_t leaf) {
    const std::size_t n0 = params_.n0;
    used_.begin_overlay();
    std::vector<std::uint32_t> level{leaf};
    std::optional<std::vector<Vertex>> closed;
    for (std::uint32_t depth = 0; depth <= params_.i0 && !closed; ++depth) {
      std::vector<std::uint32_t> next;
      for (std::uint32_t id : level) {
        forest.collect(id);
        const Node node = forest.nodes[id];
        for (Vertex w : adj_.in(node.start)) {
          if (w == node.start) continue;
          if (w == node.end) {
            if (node.length >= n0) {
              closed = forest.close(id);
              break;
            }
            continue;
          }
          if (depth == params_.i0 || used_.size() >= params_.w_cap) continue;
          const Vertex x = forest.succ(w);
          const bool fresh = !used_.contains(x) && !used_.contains(w);
          used_.insert(node.start);
          used_.insert(w);
          if (!fresh || x == kNone) continue;
          const auto where = forest.locate(w);
          Node child;
          child.parent = id;
          child.start = x;
          child.end = node.end;
          child.v1 = w;
          child.s1 = node.start;
          if (where.on_path) {
            // u..w closes into a cycle, x..v stays the path.
            const std::size_t tail = where.count - 1;
            const std::size_t cycle = node.length - tail;
            if (cycle < n0 || tail < n0) continue;
            child.length = tail;
          } else {
            child.length = node.length + where.count;
          }
          if (next.size() < params_.nu) {
            next.push_back(static_cast<std::uint32_t>(forest.nodes.size()));
            forest.nodes.push_back(child);
          }
        }
        if (closed) break;
      }
      if (next.empty()) break;
      level = std::move(next);
    }
    used_.end_overlay();
    return closed;
  }

  const CoreAdjacency& adj_;
  const Parameters& params_;
  Phase2Stats* stats_;
  UsedSet used_;
};

std::size_t count_small(const CycleCover& cover, std::size_t n0) {
  return static_cast<std::size_t>(
      std::count_if(cover.cycles.begin(), cover.cycles.end(), [&](const auto& c) { return c.size() < n0; }));
}

}  // namespace

std::optional<CycleCover> phase2_eliminate_small(const CycleCover& cover, std::span<const Edge> k2_edges,
                                                 const Parameters& params, Rng& rng, Phase2Stats* stats) {
  const auto n = static_cast<Vertex>(cover.vertex_count());
  const std::size_t n0 = params.n0;
  if (stats) stats->small_cycles_initial = count_small(cover, n0);
  CycleCover current = cover;
  const CoreAdjacency adj(n, k2_edges);
  Eliminator eliminator(adj, params, stats, n);

  for (;;) {
    // Smallest small cycle, ties to the lowest minimum vertex.
    const std::vector<Vertex>* target = nullptr;
    Vertex target_min = 0;
    for (const auto& cycle : current.cycles) {
      if (cycle.size() >= n0) continue;
      const Vertex lo = *std::min_element(cycle.begin(), cycle.end());
      if (!target || cycle.size() < target->size() || (cycle.size() == target->size() && lo < target_min)) {
        target = &cycle;
        target_min = lo;
      }
    }
    if (!target) return current;

    const std::size_t before = count_small(current, n0);
    const Base base(current);
    const std::vector<Vertex> cycle = *target;
    const std::size_t offset = rng.below(cycle.size());
    std::optional<std::vector<Vertex>> next;
    for (std::size_t t = 0; t < cycle.size() && !next; ++t) {
      const Vertex v0 = cycle[(offset + t) % cycle.size()];
      if (stats) ++stats->broken_edges_tried;
      next = eliminator.attempt(base, v0, base.succ[v0]);
    }
    if (!next) return std::nullopt;
    CycleCover updated = CycleCover::from_successors(*next);
    if (count_small(updated, n0) >= before) throw std::logic_error("phase 2 step did not shrink the small-cycle set");
    current = std::move(updated);
    if (stats) ++stats->eliminated;
  }
}

}  // namespace hamcond
