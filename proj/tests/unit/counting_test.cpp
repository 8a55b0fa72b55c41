#include <cmath>

#include "doctest.h"
#include "hamcond/counting.hpp"
#include "hamcond/error.hpp"
#include "hamcond/oracle.hpp"

using namespace hamcond;

TEST_CASE("surjections") {
  CHECK(surjections(4, 3) == 36);
  CHECK(exact_omega1(3, 4) == 1296);
  CHECK(surjections(2, 3) == 0);
  CHECK(exact_omega1(3, 2) == 0);
  mpz_class fact = 1;
  for (std::size_t n = 1; n <= 12; ++n) {
    fact *= static_cast<unsigned long>(n);
    CHECK(surjections(n, n) == fact);
    CHECK(exact_omega1(static_cast<Vertex>(n), n) == fact * fact);
  }
  for (std::size_t m = 0; m <= 12; ++m) {
    for (std::size_t n = 1; n <= 12; ++n) {
      mpz_class nf = 1;
      for (std::size_t i = 2; i <= n; ++i) nf *= static_cast<unsigned long>(i);
      CHECK(surjections(m, n) == nf * stirling2(m, n));
    }
  }
}

TEST_CASE("exact digraph counts") {
  CHECK(count_digraphs_exact(3, 4) == 9);
  CHECK(count_digraphs_exact(2, 2) == 1);
  CHECK(count_digraphs_exact(3, 6) == 1);
  CHECK(count_digraphs_exact(3, 5) == 6);
  for (const auto& [n, m] : std::vector<std::pair<Vertex, std::size_t>>{{4, 5}, {4, 7}, {5, 6}, {5, 9}}) {
    CHECK(count_digraphs_exact(n, m) == static_cast<unsigned long>(enumerate_digraphs(n, m).size()));
  }
  // Simple digraphs are a subset of Omega_1, each realised by m! sequences.
  for (const auto& [n, m] : std::vector<std::pair<Vertex, std::size_t>>{{3, 4}, {4, 6}, {5, 8}}) {
    mpz_class fact = 1;
    for (std::size_t i = 2; i <= m; ++i) fact *= static_cast<unsigned long>(i);
    CHECK(count_digraphs_exact(n, m) * fact <= exact_omega1(n, m));
  }
}

TEST_CASE("MPFR log-count matches the integer count") {
  for (const auto& [n, m] : std::vector<std::pair<Vertex, std::size_t>>{{20, 60}, {40, 120}, {60, 180}}) {
    const double exact = log_of(count_digraphs_exact(n, m));
    CHECK(log_count_digraphs(n, m) == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("count_asymptotic") {
  const CountReport small = count_asymptotic(3, 4, true);
  REQUIRE(small.exact_count);
  CHECK(*small.exact_count == 9);
  CHECK(small.exact_method == "enumeration");
  REQUIRE(small.ratio);
  CHECK(*small.ratio > 0);
  CHECK(std::isfinite(*small.ratio));
  CHECK(small.variants.size() == 3);

  const CountReport r = count_asymptotic(100, 300, false);
  CHECK(std::abs(r.omega1_ratio - 1) < 0.05);
  CHECK_FALSE(r.log_exact.has_value());
  CHECK(r.selected.empty());

  CHECK_THROWS_AS(count_asymptotic(5, 5), Error);
}

TEST_CASE("asymptotic error shrinks as n doubles at m = 3n") {
  double previous = INFINITY;
  for (Vertex n : {50u, 100u, 200u, 400u}) {
    const CountReport r = count_asymptotic(n, 3 * n, true);
    REQUIRE(r.ratio);
    const double err = std::abs(std::log(*r.ratio));
    CHECK(err <= previous);
    previous = err;
  }
}
