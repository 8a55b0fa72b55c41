#include "hamcond/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "hamcond/error.hpp"
#include "hamcond/matching.hpp"

namespace hamcond {

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::False: return "false";
    case Verdict::True: return "true";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

ExactResult hamiltonicity_bitmask(const Digraph& d) {
  const Vertex n = d.vertex_count();
  if (n > kBitmaskLimit) throw Error(ErrorCode::TooLarge, "bitmask DP needs n <= 24");
  ExactResult result;
  if (n == 0) {
    result.verdict = Verdict::False;
    return result;
  }
  if (n == 1) {
    result.verdict = Verdict::False;  // no loops, so no 1-cycle
    return result;
  }
  // ends[mask]: vertices v such that some path 0 -> ... -> v visits exactly
  // mask. Only masks containing vertex 0 are used.
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<std::uint32_t> ends(full + 1, 0);
  std::vector<std::uint32_t> out_mask(n, 0), in_mask(n, 0);
  for (Vertex v = 0; v < n; ++v) {
    for (Vertex w : d.out(v)) out_mask[v] |= 1u << w;
    for (Vertex w : d.in(v)) in_mask[v] |= 1u << w;
  }
  ends[1] = 1;
  for (std::size_t mask = 1; mask <= full; mask += 2) {
    std::uint32_t e = ends[mask];
    if (!e) continue;
    ++result.nodes;
    while (e) {
      const int v = std::countr_zero(e);
      e &= e - 1;
      std::uint32_t next = out_mask[v] & ~static_cast<std::uint32_t>(mask);
      while (next) {
        const int w = std::countr_zero(next);
        next &= next - 1;
        ends[mask | (std::size_t{1} << w)] |= 1u << w;
      }
    }
  }
  const std::uint32_t closers = ends[full] & in_mask[0];
  if (!closers) {
    result.verdict = Verdict::False;
    return result;
  }
  result.verdict = Verdict::True;
  std::vector<Vertex> reversed;
  std::size_t mask = full;
  auto v = static_cast<Vertex>(std::countr_zero(closers));
  while (v != 0) {
    reversed.push_back(v);
    const std::size_t prev = mask & ~(std::size_t{1} << v);
    const std::uint32_t options = ends[prev] & in_mask[v];
    v = static_cast<Vertex>(std::countr_zero(options));
    mask = prev;
  }
  result.cycle.push_back(0);
  result.cycle.insert(result.cycle.end(), reversed.rbegin(), reversed.rend());
  return result;
}

namespace {

class Backtracker {
 public:
  Backtracker(const Digraph& d, std::uint64_t budget)
      : d_(d), n_(d.vertex_count()), budget_(budget), visited_(n_, 0), avail_in_(n_), avail_out_(n_) {
    for (Vertex v = 0; v < n_; ++v) {
      avail_in_[v] = d.in_degree(v);
      avail_out_[v] = d.out_degree(v);
    }
  }

  ExactResult run() {
    ExactResult result;
    if (n_ < 2 || d_.min_degree() < 1 || !matching_ok(0)) {
      result.verdict = Verdict::False;
      return result;
    }
    path_.push_back(0);
    visited_[0] = 1;
    const int found = search(0);
    result.nodes = nodes_;
    if (found == 1) {
      result.verdict = Verdict::True;
      result.cycle = path_;
    } else {
      result.verdict = found == 0 ? Verdict::False : Verdict::Unknown;
    }
    return result;
  }

 private:
  // 1 found, 0 exhausted, -1 out of budget.
  int search(Vertex end) {
    if (++nodes_ > budget_) return -1;
    if (path_.size() == n_) return d_.has_edge(end, 0) ? 1 : 0;
    if (path_.size() % 8 == 0 && !matching_ok(end)) return 0;

    std::vector<Vertex> candidates;
    Vertex forced = n_;
    for (Vertex u : d_.out(end)) {
      if (visited_[u]) continue;
      if (avail_in_[u] == 1) {
        if (forced != n_) return 0;  // two vertices depend on `end` alone
        forced = u;
      }
      candidates.push_back(u);
    }
    if (forced != n_) candidates.assign(1, forced);
    std::sort(candidates.begin(), candidates.end(),
              [&](Vertex a, Vertex b) { return avail_out_[a] != avail_out_[b] ? avail_out_[a] < avail_out_[b] : a < b; });

    for (Vertex w : candidates) {
      const bool feasible = extend(end, w);
      if (feasible) {
        const int r = search(w);
        if (r != 0) return r;
      }
      retract(end, w);
    }
    return 0;
  }

  // Path end -> w. Returns false when some vertex loses its last option.
  bool extend(Vertex v, Vertex w) {
    bool ok = true;
    visited_[w] = 1;
    path_.push_back(w);
    const bool complete = path_.size() == n_;
    for (Vertex u : d_.out(v)) {
      if (u == w) continue;
      --avail_in_[u];
      if (avail_in_[u] == 0 && (!visited_[u] || (u == 0 && !complete))) ok = false;
    }
    for (Vertex t : d_.in(w)) {
      if (t == v) continue;
      --avail_out_[t];
      if (avail_out_[t] == 0 && !visited_[t]) ok = false;
    }
    if (avail_out_[w] == 0) ok = false;
    return ok;
  }

  void retract(Vertex v, Vertex w) {
    for (Vertex u : d_.out(v)) {
      if (u != w) ++avail_in_[u];
    }
    for (Vertex t : d_.in(w)) {
      if (t != v) ++avail_out_[t];
    }
    visited_[w] = 0;
    path_.pop_back();
  }

  // Remaining arcs must admit a perfect matching from {end} + unvisited
  // onto unvisited + {0}.
  bool matching_ok(Vertex end) {
    std::vector<Vertex> a_index(n_, n_), b_index(n_, n_);
    Vertex a_count = 0, b_count = 0;
    for (Vertex v = 0; v < n_; ++v) {
      if (!visited_[v] || v == end) a_index[v] = a_count++;
      if (!visited_[v] || v == 0) b_index[v] = b_count++;
    }
    if (a_count != b_count) return false;
    std::vector<Edge> arcs;
    for (Vertex v = 0; v < n_; ++v) {
      if (a_index[v] == n_) continue;
      for (Vertex u : d_.out(v)) {
        if (b_index[u] != n_) arcs.push_back({a_index[v], b_index[u]});
      }
    }
    return max_bipartite_matching(BipartiteGraph(a_count, arcs)).is_perfect();
  }

  const Digraph& d_;
  Vertex n_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<std::uint8_t> visited_;
  std::vector<std::uint32_t> avail_in_, avail_out_;
  std::vector<Vertex> path_;
};

}  // namespace

ExactResult hamiltonicity_backtrack(const Digraph& d, std::uint64_t budget) {
  return Backtracker(d, budget).run();
}

ExactResult exact_hamiltonicity(const Digraph& d, std::uint64_t budget) {
  if (d.vertex_count() <= kBitmaskLimit) return hamiltonicity_bitmask(d);
  return hamiltonicity_backtrack(d, budget);
}

bool hamiltonicity_brute_force(const Digraph& d) {
  const Vertex n = d.vertex_count();
  if (n > 10) throw Error(ErrorCode::TooLarge, "brute force needs n <= 10");
  if (n < 2) return false;
  std::vector<Vertex> rest(n - 1);
  std::iota(rest.begin(), rest.end(), Vertex{1});
  do {
    Vertex prev = 0;
    bool ok = true;
    for (Vertex v : rest) {
      if (!d.has_edge(prev, v)) {
        ok = false;
        break;
      }
      prev = v;
    }
    if (ok && d.has_edge(prev, 0)) return true;
  } while (std::next_permutation(rest.begin(), rest.end()));
  return false;
}

std::size_t detect_obstruction(const Digraph& d) {
  const Vertex n = d.vertex_count();
  std::vector<std::uint32_t> in_cherries(n, 0), out_cherries(n, 0);
  std::size_t pairs = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (d.in_degree(v) == 1) pairs += in_cherries[d.in(v)[0]]++;
    if (d.out_degree(v) == 1) pairs += out_cherries[d.out(v)[0]]++;
  }
  return pairs;
}

std::uint64_t candidate_subset_count(Vertex n, std::size_t m) {
  const std::uint64_t slots = static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0);
  if (m > slots) return 0;
  const std::uint64_t k = std::min<std::uint64_t>(m, slots - m);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    c = c * (slots - i) / (i + 1);
    if (c > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(c);
}

void enumerate_digraphs(Vertex n, std::size_t m, const std::function<void(const Digraph&)>& visit) {
  const std::uint64_t total = candidate_subset_count(n, m);
  if (total > kEnumerationLimit) {
    throw Error(ErrorCode::TooLarge, "C(n(n-1), m) = " + std::to_string(total) + " exceeds " +
                                         std::to_string(kEnumerationLimit));
  }
  std::vector<Edge> arcs;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (u != v) arcs.push_back({u, v});
    }
  }
  const std::size_t slots = arcs.size();
  if (m > slots) return;
  std::vector<std::size_t> pick(m);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  std::vector<std::uint32_t> outd(n), ind(n);
  std::vector<Edge> chosen(m);
  for (;;) {
    std::fill(outd.begin(), outd.end(), 0);
    std::fill(ind.begin(), ind.end(), 0);
    for (std::size_t i = 0; i < m; ++i) {
      chosen[i] = arcs[pick[i]];
      ++outd[chosen[i].tail];
      ++ind[chosen[i].head];
    }
    bool ok = true;
    for (Vertex v = 0; v < n && ok; ++v) ok = outd[v] > 0 && ind[v] > 0;
    if (ok) visit(Digraph(n, chosen));
    // Next m-combination in lexicographic order.
    std::size_t i = m;
    while (i > 0 && pick[i - 1] == slots - m + i - 1) --i;
    if (i == 0) return;
    ++pick[i - 1];
    for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
}

std::vector<Digraph> enumerate_digraphs(Vertex n, std::size_t m) {
  std::vector<Digraph> out;
  enumerate_digraphs(n, m, [&](const Digraph& d) { out.push_back(d); });
  return out;
}

}  // namespace hamcond
