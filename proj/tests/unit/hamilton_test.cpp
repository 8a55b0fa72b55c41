#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "hamcond/error.hpp"
#include "hamcond/experiments.hpp"
#include "hamcond/hamilton.hpp"
#include "hamcond/oracle.hpp"
#include "hamcond/sampler.hpp"

using namespace hamcond;

namespace {

Digraph cycle_digraph(Vertex n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v) edges.push_back({v, (v + 1) % n});
  return Digraph(n, edges);
}

// 2 -> 0, 2 -> 1: vertices 0 and 1 have in-degree one through 2.
Digraph obstruction_digraph() { return Digraph(4, {{2, 0}, {2, 1}, {0, 2}, {1, 2}, {0, 3}, {3, 2}}); }

}  // namespace

TEST_CASE("Phase 0 keeps every tail and head in E1") {
  Rng rng(5);
  const Vertex n = 2000;
  const std::size_t m = threshold_edges(n, 0);
  for (const Profile profile : {Profile::Desk, Profile::Paper}) {
    const auto params = Parameters::for_profile(profile, n, m);
    const auto s = sample_simple_digraph(n, m, rng, params);
    const auto part = partition_edges(n, s.digraph.edges(), params, rng);
    std::vector<int> out(n, 0), in(n, 0);
    for (const Edge e : part.e1) {
      ++out[e.tail];
      ++in[e.head];
    }
    CHECK(*std::min_element(out.begin(), out.end()) >= 1);
    CHECK(*std::min_element(in.begin(), in.end()) >= 1);
    if (!params.share_late_edges) CHECK(part.e1.size() + part.e2.size() + part.e3.size() == m);
  }
}

TEST_CASE("Phase 0 leaves enough late edges at n = 10^4") {
  const Vertex n = 10'000;
  const std::size_t m = threshold_edges(n, 0);
  for (int t = 0; t < 20; ++t) {
    Rng rng(trial_seed(31, t));
    const auto params = Parameters::desk(n, m);
    const auto s = sample_simple_digraph(n, m, rng, params);
    const auto part = partition_edges(n, s.digraph.edges(), params, rng);
    std::set<Edge> late(part.e2.begin(), part.e2.end());
    late.insert(part.e3.begin(), part.e3.end());
    const double bound = static_cast<double>(m) - static_cast<double>(params.j1) - std::pow(n, 0.999) * params.d_min;
    CHECK(static_cast<double>(late.size()) >= bound);
    CHECK_FALSE(partition_is_degenerate(part));
  }
}

TEST_CASE("phase0_partition reports a thin split") {
  Rng rng(1);
  const Digraph d = cycle_digraph(10);
  const auto params = Parameters::desk(10, 10);
  try {
    phase0_partition(10, d.edges(), params, rng);
    FAIL("expected PartitionDegenerate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PartitionDegenerate);
  }
}

TEST_CASE("Phase 1") {
  Rng rng(2);
  SUBCASE("cycle cover uses arcs of the digraph") {
    const Vertex n = 500;
    const std::size_t m = threshold_edges(n, 3);
    const auto s = sample_simple_digraph(n, m, rng, Parameters::desk(n, m));
    const auto cover = phase1_cycle_cover(n, s.digraph.edges(), rng);
    REQUIRE(cover);
    CHECK(is_valid_cycle_cover(s.digraph, *cover));
  }
  SUBCASE("shared in-neighbour blocks a perfect matching") {
    const Digraph d = obstruction_digraph();
    CHECK_FALSE(phase1_cycle_cover(4, d.edges(), rng).has_value());
  }
  SUBCASE("relabelling reaches every cycle cover") {
    // Complete digraph on 3 vertices has two covers, (0 1 2) and (0 2 1).
    // Uniformity holds over the random-graph law, not for a fixed digraph,
    // so only require both to show up regularly.
    std::vector<Edge> edges;
    for (Vertex u = 0; u < 3; ++u) {
      for (Vertex v = 0; v < 3; ++v) {
        if (u != v) edges.push_back({u, v});
      }
    }
    int forward = 0;
    const int draws = 4000;
    for (int i = 0; i < draws; ++i) {
      const auto cover = phase1_cycle_cover(3, edges, rng);
      REQUIRE(cover);
      if (cover->successors(3)[0] == 1) ++forward;
    }
    CHECK(forward > draws / 10);
    CHECK(forward < draws * 9 / 10);
  }
}

TEST_CASE("Phase 2") {
  Rng rng(3);
  SUBCASE("an all-large cover is returned unchanged") {
    const CycleCover cover = CycleCover::from_successors(std::vector<Vertex>{1, 2, 3, 4, 5, 0});
    auto params = Parameters::desk(6, 12);
    params.n0 = 3;
    const auto out = phase2_eliminate_small(cover, {}, params, rng);
    REQUIRE(out);
    CHECK(out->cycles == cover.cycles);
  }
  SUBCASE("survivors are long and still partition the vertices") {
    const Vertex n = 2000;
    const std::size_t m = threshold_edges(n, 3);
    int eliminated = 0;
    for (int t = 0; t < 10; ++t) {
      const auto params = Parameters::desk(n, m);
      const auto s = sample_simple_digraph(n, m, rng, params);
      const auto part = partition_edges(n, s.digraph.edges(), params, rng);
      const auto cover = phase1_cycle_cover(n, part.e1, rng);
      if (!cover) continue;
      Phase2Stats stats;
      const auto out = phase2_eliminate_small(*cover, core_edges(part.e2, part.k2), params, rng, &stats);
      if (!out) continue;
      ++eliminated;
      CHECK(out->min_cycle_length() >= params.n0);
      CHECK(out->vertex_count() == n);
      CHECK(is_valid_cycle_cover(s.digraph, *out));
      CHECK(stats.eliminated <= stats.small_cycles_initial);
    }
    CHECK(eliminated >= 5);
  }
}

TEST_CASE("Phase 3") {
  Rng rng(4);
  const CycleCover cover{{{0, 1, 2}, {3, 4, 5}}};
  const std::vector<Edge> extra{{0, 4}, {3, 1}};
  std::size_t merges = 0;
  const auto cycle = phase3_patch(cover, extra, rng, &merges);
  REQUIRE(cycle);
  CHECK(*cycle == std::vector<Vertex>{0, 4, 5, 3, 1, 2});
  CHECK(merges == 1);

  const CycleCover single{{{2, 0, 1}}};
  CHECK(phase3_patch(single, {}, rng) == std::vector<Vertex>{2, 0, 1});
  CHECK_FALSE(phase3_patch(cover, {}, rng).has_value());
}

TEST_CASE("find_hamilton on fixed digraphs") {
  Rng rng(6);
  SUBCASE("directed cycle") {
    const Digraph d = cycle_digraph(40);
    const auto r = find_hamilton(d, Parameters::desk(40, 40), rng);
    REQUIRE(r.found());
    CHECK(r.trace.restarts == 0);
    CHECK(r.trace.solved_by == "engine");
    CHECK(verify_hamilton_cycle(d, r.cycle));
  }
  SUBCASE("obstruction digraph") {
    const auto r = find_hamilton(obstruction_digraph(), Parameters::desk(4, 6), rng);
    CHECK(r.status == HamiltonStatus::ObstructionFound);
    CHECK(r.trace.obstruction_count == 2);
    CHECK(r.cycle.empty());
  }
  SUBCASE("exact fallback decides small instances") {
    // Two directed triangles joined one way: strongly connected fails, no obstruction pair.
    const Digraph d(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}, {0, 3}, {1, 4}, {2, 5}});
    CHECK(detect_obstruction(d) == 0);
    const auto r = find_hamilton(d, Parameters::desk(6, 9), rng);
    CHECK(r.status == HamiltonStatus::ExactNegative);
    CHECK(r.trace.exact_consulted);
    HamiltonPolicy no_exact;
    no_exact.exact_fallback = false;
    CHECK(find_hamilton(d, Parameters::desk(6, 9), rng, no_exact).status == HamiltonStatus::EngineGaveUp);
  }
  SUBCASE("zero-degree vertex is rejected") {
    CHECK_THROWS_AS(find_hamilton(Digraph(3, {{0, 1}, {1, 0}}), Parameters::desk(3, 2), rng), Error);
  }
}

TEST_CASE("find_hamilton on random instances returns verified cycles") {
  const Vertex n = 1000;
  const std::size_t m = threshold_edges(n, 4);
  int found = 0;
  for (int t = 0; t < 20; ++t) {
    Rng rng(trial_seed(8, t));
    const auto params = Parameters::desk(n, m);
    const auto s = sample_simple_digraph(n, m, rng, params);
    HamiltonPolicy policy;
    policy.exact_fallback = false;
    const auto r = find_hamilton(s.digraph, params, rng, policy);
    if (r.found()) {
      ++found;
      CHECK(verify_hamilton_cycle(s.digraph, r.cycle));
      CHECK(r.trace.attempts.size() == r.trace.restarts + 1);
    }
  }
  CHECK(found >= 15);
}

TEST_CASE("find_hamilton is reproducible") {
  const Vertex n = 800;
  const std::size_t m = threshold_edges(n, 2);
  auto run = [&] {
    Rng rng(99);
    const auto params = Parameters::desk(n, m);
    const auto s = sample_simple_digraph(n, m, rng, params);
    return find_hamilton(s.digraph, params, rng).cycle;
  };
  CHECK(run() == run());
}

TEST_CASE("parameter profiles validate") {
  for (const Vertex n : {10u, 1000u, 100000u}) {
    const std::size_t m = threshold_edges(n, 0);
    CHECK_NOTHROW(Parameters::paper(n, m).validate());
    CHECK_NOTHROW(Parameters::desk(n, m).validate());
    CHECK(Parameters::desk(n, m).d_min >= 3);
  }
  CHECK(parse_profile("paper") == Profile::Paper);
  CHECK_THROWS_AS(parse_profile("fast"), Error);
}
