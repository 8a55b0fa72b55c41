#include "hamcond/matching.hpp"

#include <limits>

namespace hamcond {

Matching max_bipartite_matching(const BipartiteGraph& g) {
  const Vertex n = g.side_size();
  Matching result{std::vector<Vertex>(n, kUnmatched), std::vector<Vertex>(n, kUnmatched), 0};
  auto& mate_a = result.mate_of_a;
  auto& mate_b = result.mate_of_b;

  // Greedy warm start.
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b : g.neighbors_of_a(a)) {
      if (mate_b[b] == kUnmatched) {
        mate_a[a] = b;
        mate_b[b] = a;
        ++result.size;
        break;
      }
    }
  }

  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> layer(n);
  std::vector<Vertex> queue(n);
  std::vector<std::size_t> cursor(n);
  std::vector<Vertex> stack;

  while (true) {
    // BFS from free A vertices; layer[a] = alternating distance.
    std::size_t head = 0, tail = 0;
    for (Vertex a = 0; a < n; ++a) {
      if (mate_a[a] == kUnmatched) {
        layer[a] = 0;
        queue[tail++] = a;
      } else {
        layer[a] = kInf;
      }
    }
    std::uint32_t free_layer = kInf;
    while (head < tail) {
      const Vertex a = queue[head++];
      if (layer[a] >= free_layer) continue;
      for (Vertex b : g.neighbors_of_a(a)) {
        const Vertex next = mate_b[b];
        if (next == kUnmatched) {
          free_layer = std::min(free_layer, layer[a] + 1);
        } else if (layer[next] == kInf) {
          layer[next] = layer[a] + 1;
          queue[tail++] = next;
        }
      }
    }
    if (free_layer == kInf) break;

    // Iterative DFS along layered edges.
    std::size_t augmented = 0;
    for (Vertex a = 0; a < n; ++a) cursor[a] = 0;
    for (Vertex root = 0; root < n; ++root) {
      if (mate_a[root] != kUnmatched) continue;
      stack.assign(1, root);
      while (!stack.empty()) {
        const Vertex a = stack.back();
        const auto nbrs = g.neighbors_of_a(a);
        bool advanced = false;
        while (cursor[a] < nbrs.size()) {
          const Vertex b = nbrs[cursor[a]++];
          const Vertex next = mate_b[b];
          if (next == kUnmatched) {
            if (layer[a] + 1 != free_layer) continue;
            // Flip the path root .. a -> b.
            Vertex carry = b;
            for (std::size_t k = stack.size(); k-- > 0;) {
              const Vertex u = stack[k];
              const Vertex previous = mate_a[u];
              mate_a[u] = carry;
              mate_b[carry] = u;
              carry = previous;
            }
            ++augmented;
            stack.clear();
            advanced = true;
            break;
          }
          if (layer[next] == layer[a] + 1) {
            stack.push_back(next);
            advanced = true;
            break;
          }
        }
        if (!advanced) {
          layer[a] = kInf;  // dead end for this phase
          stack.pop_back();
        }
      }
    }
    if (augmented == 0) break;
    result.size += augmented;
  }
  return result;
}

}  // namespace hamcond
