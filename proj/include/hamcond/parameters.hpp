#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "hamcond/graph.hpp"

namespace hamcond {

enum class Profile { Paper, Desk };

std::string_view to_string(Profile profile) noexcept;
/// "paper" or "desk"; throws Error{InvalidArgument} otherwise.
Profile parse_profile(std::string_view text);

/// How Phase 0 decides which late edges join E1.
enum class PartitionRule {
  /// Keep a late edge if its tail (head) appeared fewer than d_min times
  /// among the first j1 tails (heads).
  PrefixCount,
  /// Keep a late edge while its tail (head) has fewer than d_min E1 edges so
  /// far, counting the prefix and every edge already kept.
  TopUp,
};

/// Every constant of the construction, as a function of (n, m). The paper
/// profile evaluates the asymptotic formulas literally; the desk profile
/// keeps the structure but picks values that leave usable edge classes at
/// n <= 10^5. Natural logarithms throughout.
struct Parameters {
  Profile profile = Profile::Desk;
  Vertex n = 0;
  std::size_t m = 0;

  double max_degree_bound = 0;       // Delta_0 = log^2 n
  double working_degree_bound = 0;   // Delta_1 = 6 log n
  std::uint32_t d_min = 1;           // Phase-0 partition threshold
  std::uint32_t core_degree = 1;     // peeling threshold for K2, K3
  double e2_share = 0.5;             // P(late edge -> E2), else E3
  bool share_late_edges = false;     // E2 = E3 = every late edge
  std::size_t j1 = 1;                // Phase-0 prefix length, <= m
  std::size_t n0 = 3;                // small-cycle threshold
  std::size_t nu = 1;                // Out-Phase leaf target
  std::uint32_t i0 = 1;              // rotation tree depth cap
  double ell0 = 1;                   // short-cycle diagnostic length
  std::size_t w_cap = 1;             // used-set cap
  std::uint32_t small_degree = 1;    // SMALL: total degree <= this
  PartitionRule partition_rule = PartitionRule::PrefixCount;

  static Parameters paper(Vertex n, std::size_t m);
  static Parameters desk(Vertex n, std::size_t m);
  static Parameters for_profile(Profile profile, Vertex n, std::size_t m);

  /// Throws Error{InvalidArgument} when an invariant fails.
  void validate() const;
};

}  // namespace hamcond
