#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hamcond/graph.hpp"
#include "hamcond/parameters.hpp"
#include "hamcond/rng.hpp"

namespace hamcond {

/// Truncated Poisson Z(z), P(Z = k) = z^k / (k! (e^z - 1)), k >= 1, with z
/// tuned so that E(Z) = rho = m/n.
struct TruncatedPoissonModel {
  double rho = 1;
  double z = 0;
  double sigma2 = 0;
};

/// f(z) = z e^z / (e^z - 1), extended by f(0) = 1.
double truncated_poisson_mean(double z);
double truncated_poisson_variance(double z);

/// Bisection on [max(rho - 1, 0), rho]. Requires rho > 1.
TruncatedPoissonModel solve_z(double rho, double tol = 1e-12);

/// z^k / (k! (e^z - 1)) evaluated in log space. DomainError for k < 1 or z <= 0.
double trunc_poisson_pmf(long long k, double z);

/// Inversion sampler for Z(z) over a precomputed CDF table.
class TruncatedPoissonSampler {
 public:
  explicit TruncatedPoissonSampler(double z);

  std::uint32_t operator()(Rng& rng) const;
  [[nodiscard]] double z() const noexcept { return z_; }
  [[nodiscard]] double pmf(std::uint32_t k) const;
  [[nodiscard]] double pmf_max() const noexcept { return pmf_max_; }
  /// Largest value the sampler can return.
  [[nodiscard]] std::uint32_t max_value() const noexcept { return static_cast<std::uint32_t>(pmf_.size() - 1); }

 private:
  double z_;
  double pmf_max_ = 0;
  std::vector<double> pmf_;  // pmf_[k], k = 0 unused
  std::vector<double> cdf_;  // cdf_[k] = P(Z <= k)
  std::vector<std::uint32_t> guide_;  // guide_[b]: smallest k with cdf_[k] > b / size
};

std::uint32_t sample_truncated_poisson(const TruncatedPoissonModel& model, Rng& rng);

struct DegreeSequence {
  std::vector<std::uint32_t> out;
  std::vector<std::uint32_t> in;
};

/// One coordinate vector distributed as n i.i.d. Z(z) conditioned on
/// summing to m, by rejection on the first coordinates with an exact tail.
/// Throws AttemptCapExceeded after `attempt_cap` rejections.
std::vector<std::uint32_t> sample_conditioned_vector(Vertex n, std::size_t m, const TruncatedPoissonSampler& sampler,
                                                     Rng& rng, std::size_t attempt_cap);

inline constexpr std::size_t kDefaultAttemptCap = 1'000'000;

/// Out- and in-degree vectors drawn independently; m == n yields all ones.
DegreeSequence sample_degree_sequence(Vertex n, std::size_t m, const TruncatedPoissonModel& model, Rng& rng,
                                      std::size_t attempt_cap = kDefaultAttemptCap);

/// Tails: uniform permutation of {out_i x i}; heads: independent uniform
/// permutation of {in_i x i}.
EdgeSequence assemble_sequence(const DegreeSequence& deg, Rng& rng);

/// P-switch on a parallel pair i != j: head(i) <- tail(j), tail(j) <- head(i).
/// Leaves loops at both endpoints. Throws NotParallelPair.
EdgeSequence p_switch(const EdgeSequence& seq, std::size_t i, std::size_t j);
/// L-switch of loop i through non-loop j: swaps tail(i) and tail(j), turning
/// (x,x), (a,b) into (a,x), (x,b). Throws NotLoop / TargetIsLoop.
EdgeSequence l_switch(const EdgeSequence& seq, std::size_t i, std::size_t j);

/// The bare slot substitutions behind p_switch / l_switch, without checks.
void apply_p_switch(EdgeSequence& seq, std::size_t i, std::size_t j);
void apply_l_switch(EdgeSequence& seq, std::size_t i, std::size_t j);

struct SanitizeResult {
  EdgeSequence sequence;
  std::size_t p_switches = 0;
  std::size_t l_switches = 0;
  std::size_t rejected = 0;
  [[nodiscard]] std::size_t switch_count() const noexcept { return p_switches + l_switches; }
};

/// Removes every loop and multi-edge: one P-switch per parallel pair, then
/// random L-switches (uniform loop, uniform non-loop edge), redrawing any
/// switch that would create a loop or a parallel edge. Throws
/// SanitizeStalled on a triple edge or after 10^4 (|L| + 2|M|) attempts.
SanitizeResult sanitize(const EdgeSequence& seq, Rng& rng);

struct Diagnostics {
  std::uint32_t delta = 0;
  std::size_t loops = 0;
  std::size_t multis = 0;
  std::uint64_t s1 = 0;
  std::size_t small = 0;
  std::size_t switches = 0;
};

/// Measured on `seq`; `switches` is left for the caller.
Diagnostics measure_diagnostics(const EdgeSequence& seq, std::uint32_t small_degree);

struct SampledDigraph {
  Digraph digraph;
  Diagnostics diagnostics;
  TruncatedPoissonModel model;
  std::size_t retries = 0;
};

inline constexpr std::size_t kDefaultSampleRetries = 1000;

/// solve_z -> sample_degree_sequence -> assemble_sequence -> sanitize ->
/// build_digraph. Sanitizer stalls and attempt-cap hits are retried with
/// fresh randomness up to `max_retries` times, then rethrown. Requires m >= n.
SampledDigraph sample_simple_digraph(Vertex n, std::size_t m, Rng& rng, const Parameters& params,
                                     std::size_t max_retries = kDefaultSampleRetries);

/// Exact distribution of Z_1 + ... + Z_n over sums 0..max_sum by convolution.
std::vector<double> truncated_poisson_sum_distribution(Vertex n, double z, std::size_t max_sum);

/// Exact P(Z_1 + ... + Z_n = m).
double local_clt_probability(Vertex n, std::size_t m, const TruncatedPoissonModel& model);

/// 1 / (sigma sqrt(2 pi n)).
double local_clt_approximation(Vertex n, const TruncatedPoissonModel& model);

}  // namespace hamcond
