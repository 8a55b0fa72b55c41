#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hamcond/graph.hpp"

namespace hamcond {

/// Surj(m, n) = sum_k (-1)^k C(n,k) (n-k)^m: maps [m] -> [n] onto.
mpz_class surjections(std::size_t m, std::size_t n);

/// S(m, n) by the triangle recurrence; test oracle for surjections.
mpz_class stirling2(std::size_t m, std::size_t n);

/// |Omega_1| = Surj(m, n)^2.
mpz_class exact_omega1(Vertex n, std::size_t m);

/// Natural log of a positive integer.
double log_of(const mpz_class& value);

/// Simple digraphs on [n] with m arcs and min in/out-degree >= 1, by
/// inclusion-exclusion over the vertex sets S (out-degree 0) and
/// T (in-degree 0). Exact integer arithmetic.
mpz_class count_digraphs_exact(Vertex n, std::size_t m);

/// Natural log of the same count, summed in MPFR arithmetic whose
/// precision grows with the expected cancellation; terms far below the
/// result are skipped.
double log_count_digraphs(Vertex n, std::size_t m);

struct AsymptoticVariant {
  std::string name;
  double log_value = 0;               // natural log of the estimate
  std::optional<double> log_ratio;    // log(exact / estimate)
};

struct CountReport {
  Vertex n = 0;
  std::size_t m = 0;
  double z = 0;
  double sigma2 = 0;

  std::optional<mpz_class> exact_count;
  std::string exact_method;        // "enumeration", "inclusion_exclusion", "inclusion_exclusion_mpfr"
  std::optional<double> log_exact;

  /// printed:        m! (e^z-1)^{2n} e^{-z(z+1)} / (2 pi sigma z^{2m})
  /// reconciled:     same with 2 pi n sigma^2 in the denominator
  /// configuration:  reconciled with e^{-rho - z^2/2} as the simple-graph factor
  std::vector<AsymptoticVariant> variants;
  std::string selected;            // variant with the smallest |log ratio|, if any
  std::optional<double> ratio;     // exact / selected

  mpz_class omega1_exact;
  double log_omega1_exact = 0;
  /// (m! (e^z-1)^n z^{-m} / (sigma sqrt(2 pi n)))^2
  double log_omega1_factorized = 0;
  double omega1_ratio = 0;
};

/// All asymptotic variants; the exact side is filled when `with_exact` and
/// feasible (enumeration for small cases, inclusion-exclusion otherwise).
CountReport count_asymptotic(Vertex n, std::size_t m, bool with_exact = true);

}  // namespace hamcond
