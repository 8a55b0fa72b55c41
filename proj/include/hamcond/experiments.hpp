#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hamcond/graph.hpp"
#include "hamcond/hamilton.hpp"
#include "hamcond/oracle.hpp"
#include "hamcond/parameters.hpp"
#include "hamcond/stats.hpp"

namespace hamcond {

/// m = ceil((n/2)(log n + 2 log log n + c)).
std::size_t threshold_edges(Vertex n, double c);

/// Limit law e^{-e^{-c}/8}.
double limit_probability(double c);

/// Worker count: HAMCOND_THREADS if set and positive, else the logical CPUs.
unsigned worker_count();

/// Runs task(i) for i in [0, count) on a bounded pool. Results are placed
/// by index, so scheduling never changes output.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task);

struct ExperimentConfig {
  Vertex n = 0;
  std::vector<double> c_values;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  Profile profile = Profile::Desk;
  bool engine = false;       // find_hamilton
  bool exact = false;        // exact_hamiltonicity (n <= policy.exact_limit)
  bool matching = false;     // perfect matching of G(E1) after Phase 0
  bool obstruction = false;  // detect_obstruction
  HamiltonPolicy policy;
  unsigned threads = 0;      // 0: worker_count()

  void validate() const;
};

enum class TrialStatus { Ok, SamplerFailed };

struct TrialRecord {
  std::size_t index = 0;  // global trial index, c-major
  std::uint64_t seed = 0;
  double c = 0;
  std::size_t m = 0;
  TrialStatus status = TrialStatus::Ok;
  std::string error;

  std::optional<HamiltonStatus> engine;
  bool cycle_verified = false;
  std::size_t restarts = 0;
  std::vector<std::string> failed_phases;
  std::string solved_by;
  std::optional<Verdict> exact;
  std::optional<bool> matching;
  std::optional<std::size_t> obstruction;
  double runtime_ms = 0;  // metadata, excluded from reproducibility checks
};

struct PointSummary {
  Vertex n = 0;
  double c = 0;
  std::size_t m = 0;
  std::size_t trials = 0;
  std::size_t valid = 0;
  std::size_t sampler_failures = 0;
  bool invalid = false;  // sampler failures reached 1% of trials
  double prediction = 0;

  // Primary outcome of the experiment at this point.
  std::size_t successes = 0;
  double p_hat = 0;
  Interval ci;

  // Secondary estimators, when requested.
  std::optional<double> engine_rate, matching_rate, exact_rate;
  std::size_t exact_unknown = 0;
  std::vector<std::uint64_t> obstruction_histogram;
  double obstruction_mean = 0, obstruction_variance = 0, obstruction_zero = 0;
  std::optional<ChiSquare> obstruction_fit;
  std::size_t invalid_cycles = 0;
};

enum class ExperimentKind { Threshold, Matching, Obstruction };

std::string_view to_string(ExperimentKind kind) noexcept;

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::Threshold;
  ExperimentConfig config;
  std::vector<PointSummary> points;
  std::vector<TrialRecord> records;
};

/// Samples every trial and evaluates the requested estimators; aggregates
/// with `kind` choosing the primary outcome.
ExperimentResult run_sweep(const ExperimentConfig& config, ExperimentKind kind);

/// Engine success (find_hamilton) against e^{-e^{-c}/8}.
ExperimentResult run_threshold(ExperimentConfig config);
/// Perfect matching of G(E1) against the same limit.
ExperimentResult run_matching_threshold(ExperimentConfig config);
/// detect_obstruction counts against Poisson(e^{-c}/8).
ExperimentResult run_obstruction_law(ExperimentConfig config);

/// Recomputes per-point aggregates from the records alone.
std::vector<PointSummary> aggregate(const ExperimentConfig& config, ExperimentKind kind,
                                    const std::vector<TrialRecord>& records);

struct UniformityReport {
  Vertex n = 0;
  std::size_t m = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t support = 0;
  std::vector<std::uint64_t> counts;  // by enumeration order
  ChiSquare chi2;
  double min_expected = 0;
  std::size_t invalid_samples = 0;    // not simple, wrong m, degree 0, or off-support
};

UniformityReport run_uniformity(Vertex n, std::size_t m, std::size_t samples, std::uint64_t seed,
                                Profile profile = Profile::Desk, unsigned threads = 0);

struct EquivalenceReport {
  Vertex n = 0;
  std::size_t m = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t decided = 0;
  std::size_t budget_exhausted = 0;
  std::size_t hamiltonian = 0;
  std::size_t with_obstruction = 0;
  std::size_t disagreements = 0;           // exact verdict != (obstruction == 0)
  std::size_t certificate_violations = 0;  // obstruction > 0 but Hamiltonian
  double disagreement_fraction = 0;
  std::vector<std::uint64_t> disagreeing_seeds;
  std::vector<std::uint64_t> unknown_seeds;
};

EquivalenceReport run_equivalence(Vertex n, std::size_t m, std::size_t trials, std::uint64_t seed,
                                  Profile profile = Profile::Desk, std::uint64_t budget = 20'000'000,
                                  unsigned threads = 0);

/// Header n,c,m,trials,p_hat,lo95,hi95,prediction and one row per point.
void write_csv(std::ostream& out, const ExperimentResult& result);
/// Plot script for the threshold curve read from `csv_path`.
void write_gnuplot(std::ostream& out, const ExperimentResult& result, const std::string& csv_path);

}  // namespace hamcond
