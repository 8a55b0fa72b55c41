#include "hamcond/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "hamcond/error.hpp"
#include "hamcond/oracle.hpp"
#include "hamcond/rng.hpp"
#include "hamcond/sampler.hpp"

namespace hamcond {

std::size_t threshold_edges(Vertex n, double c) {
  const double ln = std::log(static_cast<double>(n));
  const double m = std::ceil(0.5 * n * (ln + 2 * std::log(ln) + c));
  return m > 0 ? static_cast<std::size_t>(m) : 0;
}

double limit_probability(double c) { return std::exp(-std::exp(-c) / 8.0); }

unsigned worker_count() {
  if (const char* env = std::getenv("HAMCOND_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& task) {
  workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(count, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void ExperimentConfig::validate() const {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "experiment needs n >= 2");
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (c_values.empty()) throw Error(ErrorCode::InvalidArgument, "no c values");
  for (double c : c_values) {
    const std::size_t m = threshold_edges(n, c);
    if (m <= n || m > static_cast<std::size_t>(n) * (n - 1)) {
      throw Error(ErrorCode::InvalidArgument,
                  "c = " + std::to_string(c) + " gives m = " + std::to_string(m) + " outside (n, n(n-1)]");
    }
  }
}

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::Threshold: return "threshold";
    case ExperimentKind::Matching: return "matching";
    case ExperimentKind::Obstruction: return "obstruction";
  }
  return "threshold";
}

namespace {

TrialRecord run_trial(const ExperimentConfig& config, std::size_t index, double c, std::size_t m) {
  TrialRecord rec;
  rec.index = index;
  rec.seed = trial_seed(config.seed, index);
  rec.c = c;
  rec.m = m;
  const auto started = std::chrono::steady_clock::now();
  Rng rng(rec.seed);
  const Parameters params = Parameters::for_profile(config.profile, config.n, m);
  std::optional<SampledDigraph> sampled;
  try {
    sampled = sample_simple_digraph(config.n, m, rng, params);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SanitizeStalled && e.code() != ErrorCode::AttemptCapExceeded) throw;
    rec.status = TrialStatus::SamplerFailed;
    rec.error = e.what();
    return rec;
  }
  const Digraph& d = sampled->digraph;

  if (config.obstruction) rec.obstruction = detect_obstruction(d);
  if (config.matching) {
    Rng local = rng.split();
    const EdgePartition part = partition_edges(config.n, d.edges(), params, local);
    rec.matching = phase1_cycle_cover(config.n, part.e1, local).has_value();
  }
  if (config.engine) {
    Rng local = rng.split();
    const HamiltonResult result = find_hamilton(d, params, local, config.policy);
    rec.engine = result.status;
    rec.cycle_verified = result.found() && verify_hamilton_cycle(d, result.cycle);
    rec.restarts = result.trace.restarts;
    rec.solved_by = result.trace.solved_by;
    for (const auto& at : result.trace.attempts) {
      if (!at.failed_phase.empty()) rec.failed_phases.push_back(at.failed_phase);
    }
  }
  if (config.exact && config.n <= config.policy.exact_limit) {
    rec.exact = exact_hamiltonicity(d, config.policy.exact_budget).verdict;
  }
  rec.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

bool primary_outcome(ExperimentKind kind, const TrialRecord& rec) {
  switch (kind) {
    case ExperimentKind::Threshold: return rec.engine && *rec.engine == HamiltonStatus::Found;
    case ExperimentKind::Matching: return rec.matching.value_or(false);
    case ExperimentKind::Obstruction: return rec.obstruction && *rec.obstruction == 0;
  }
  return false;
}

}  // namespace

std::vector<PointSummary> aggregate(const ExperimentConfig& config, ExperimentKind kind,
                                    const std::vector<TrialRecord>& records) {
  std::vector<PointSummary> points;
  for (std::size_t ci = 0; ci < config.c_values.size(); ++ci) {
    PointSummary p;
    p.n = config.n;
    p.c = config.c_values[ci];
    p.m = threshold_edges(config.n, p.c);
    p.prediction = limit_probability(p.c);
    std::size_t engine_ok = 0, engine_seen = 0, match_ok = 0, match_seen = 0, exact_true = 0, exact_seen = 0;
    std::vector<double> counts;
    for (const TrialRecord& rec : records) {
      if (rec.index / config.trials != ci) continue;
      ++p.trials;
      if (rec.status != TrialStatus::Ok) {
        ++p.sampler_failures;
        continue;
      }
      ++p.valid;
      if (primary_outcome(kind, rec)) ++p.successes;
      if (rec.engine) {
        ++engine_seen;
        if (*rec.engine == HamiltonStatus::Found) {
          ++engine_ok;
          if (!rec.cycle_verified) ++p.invalid_cycles;
        }
      }
      if (rec.matching) {
        ++match_seen;
        match_ok += *rec.matching ? 1 : 0;
      }
      if (rec.exact) {
        if (*rec.exact == Verdict::Unknown) {
          ++p.exact_unknown;
        } else {
          ++exact_seen;
          exact_true += *rec.exact == Verdict::True ? 1 : 0;
        }
      }
      if (rec.obstruction) {
        const std::size_t k = *rec.obstruction;
        if (p.obstruction_histogram.size() <= k) p.obstruction_histogram.resize(k + 1, 0);
        ++p.obstruction_histogram[k];
        counts.push_back(static_cast<double>(k));
      }
    }
    // Sampler failures leave the denominator only while they stay under 1%.
    p.invalid = p.trials > 0 && p.sampler_failures * 100 >= p.trials && p.sampler_failures > 0;
    const std::size_t denominator = p.invalid ? p.trials : p.valid;
    p.p_hat = denominator ? static_cast<double>(p.successes) / static_cast<double>(denominator) : 0.0;
    p.ci = wilson_interval(p.successes, denominator);
    if (engine_seen) p.engine_rate = static_cast<double>(engine_ok) / static_cast<double>(engine_seen);
    if (match_seen) p.matching_rate = static_cast<double>(match_ok) / static_cast<double>(match_seen);
    if (exact_seen) p.exact_rate = static_cast<double>(exact_true) / static_cast<double>(exact_seen);
    if (!counts.empty()) {
      p.obstruction_mean = mean_of(counts);
      p.obstruction_variance = variance_of(counts);
      p.obstruction_zero = static_cast<double>(p.obstruction_histogram[0]) / static_cast<double>(counts.size());
      p.obstruction_fit = chi_square_poisson(p.obstruction_histogram, std::exp(-p.c) / 8.0);
    }
    points.push_back(std::move(p));
  }
  return points;
}

ExperimentResult run_sweep(const ExperimentConfig& config, ExperimentKind kind) {
  config.validate();
  ExperimentResult result;
  result.kind = kind;
  result.config = config;
  const std::size_t total = config.c_values.size() * config.trials;
  result.records.resize(total);
  const unsigned workers = config.threads ? config.threads : worker_count();
  parallel_for(total, workers, [&](std::size_t i) {
    const double c = config.c_values[i / config.trials];
    result.records[i] = run_trial(config, i, c, threshold_edges(config.n, c));
  });
  result.points = aggregate(config, kind, result.records);
  return result;
}

ExperimentResult run_threshold(ExperimentConfig config) {
  config.engine = true;
  return run_sweep(config, ExperimentKind::Threshold);
}

ExperimentResult run_matching_threshold(ExperimentConfig config) {
  config.matching = true;
  return run_sweep(config, ExperimentKind::Matching);
}

ExperimentResult run_obstruction_law(ExperimentConfig config) {
  config.obstruction = true;
  return run_sweep(config, ExperimentKind::Obstruction);
}

UniformityReport run_uniformity(Vertex n, std::size_t m, std::size_t samples, std::uint64_t seed, Profile profile,
                                unsigned threads) {
  UniformityReport report;
  report.n = n;
  report.m = m;
  report.samples = samples;
  report.seed = seed;
  std::map<std::vector<Edge>, std::size_t> index;
  enumerate_digraphs(n, m, [&](const Digraph& d) {
    std::vector<Edge> key(d.edges().begin(), d.edges().end());
    std::sort(key.begin(), key.end());
    index.emplace(std::move(key), index.size());
  });
  report.support = index.size();
  if (report.support == 0) throw Error(ErrorCode::InvalidArgument, "empty support");

  const Parameters params = Parameters::for_profile(profile, n, m);
  std::vector<std::int64_t> cell(samples, -1);
  parallel_for(samples, threads ? threads : worker_count(), [&](std::size_t i) {
    Rng rng(trial_seed(seed, i));
    const SampledDigraph s = sample_simple_digraph(n, m, rng, params);
    if (s.digraph.edge_count() != m || s.digraph.min_degree() < 1) return;
    std::vector<Edge> key(s.digraph.edges().begin(), s.digraph.edges().end());
    std::sort(key.begin(), key.end());
    auto it = index.find(key);
    if (it != index.end()) cell[i] = static_cast<std::int64_t>(it->second);
  });
  report.counts.assign(report.support, 0);
  for (std::int64_t c : cell) {
    if (c < 0) {
      ++report.invalid_samples;
    } else {
      ++report.counts[static_cast<std::size_t>(c)];
    }
  }
  report.min_expected = static_cast<double>(samples - report.invalid_samples) / static_cast<double>(report.support);
  report.chi2 = chi_square_uniform(report.counts);
  return report;
}

EquivalenceReport run_equivalence(Vertex n, std::size_t m, std::size_t trials, std::uint64_t seed, Profile profile,
                                  std::uint64_t budget, unsigned threads) {
  EquivalenceReport report;
  report.n = n;
  report.m = m;
  report.trials = trials;
  report.seed = seed;
  const Parameters params = Parameters::for_profile(profile, n, m);
  struct Row {
    Verdict verdict = Verdict::Unknown;
    std::size_t obstruction = 0;
  };
  std::vector<Row> rows(trials);
  parallel_for(trials, threads ? threads : worker_count(), [&](std::size_t i) {
    Rng rng(trial_seed(seed, i));
    const SampledDigraph s = sample_simple_digraph(n, m, rng, params);
    rows[i].obstruction = detect_obstruction(s.digraph);
    rows[i].verdict = exact_hamiltonicity(s.digraph, budget).verdict;
  });
  for (std::size_t i = 0; i < trials; ++i) {
    const Row& r = rows[i];
    if (r.obstruction > 0) ++report.with_obstruction;
    if (r.verdict == Verdict::Unknown) {
      ++report.budget_exhausted;
      report.unknown_seeds.push_back(trial_seed(seed, i));
      continue;
    }
    ++report.decided;
    const bool ham = r.verdict == Verdict::True;
    if (ham) ++report.hamiltonian;
    if (ham == (r.obstruction > 0)) {
      ++report.disagreements;
      report.disagreeing_seeds.push_back(trial_seed(seed, i));
    }
    if (ham && r.obstruction > 0) ++report.certificate_violations;
  }
  report.disagreement_fraction =
      report.decided ? static_cast<double>(report.disagreements) / static_cast<double>(report.decided) : 0.0;
  return report;
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
  out << "n,c,m,trials,p_hat,lo95,hi95,prediction\n";
  char line[256];
  for (const PointSummary& p : result.points) {
    std::snprintf(line, sizeof line, "%u,%.6g,%zu,%zu,%.6f,%.6f,%.6f,%.6f\n", p.n, p.c, p.m, p.trials, p.p_hat, p.ci.lo,
                  p.ci.hi, p.prediction);
    out << line;
  }
}

void write_gnuplot(std::ostream& out, const ExperimentResult& result, const std::string& csv_path) {
  out << "set datafile separator ','\n"
      << "set key bottom right\n"
      << "set xlabel 'c'\n"
      << "set ylabel 'P(" << to_string(result.kind) << ")'\n"
      << "set title 'n = " << result.config.n << ", " << result.config.trials << " trials per point'\n"
      << "set yrange [0:1.05]\n"
      << "f(c) = exp(-exp(-c)/8)\n"
      << "plot '" << csv_path << "' every ::1 using 2:5:6:7 with yerrorbars title 'empirical (Wilson 95%)', \\\n"
      << "     f(x) with lines title 'exp(-exp(-c)/8)'\n";
}

}  // namespace hamcond
