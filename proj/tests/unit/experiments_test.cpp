#include <cmath>
#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "hamcond/error.hpp"
#include "hamcond/experiments.hpp"
#include "hamcond/serialization.hpp"
#include "hamcond/stats.hpp"

using namespace hamcond;

TEST_CASE("threshold arithmetic") {
  CHECK(limit_probability(0) == doctest::Approx(0.88250).epsilon(1e-5));
  CHECK(limit_probability(8) == doctest::Approx(0.99996).epsilon(1e-5));
  const double ln = std::log(1000.0);
  CHECK(threshold_edges(1000, 0) == static_cast<std::size_t>(std::ceil(500 * (ln + 2 * std::log(ln)))));
  CHECK(threshold_edges(1000, 2) == threshold_edges(1000, 0) + 1000);
}

TEST_CASE("statistics helpers") {
  const Interval ci = wilson_interval(50, 100);
  CHECK(ci.lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(ci.hi == doctest::Approx(0.5962).epsilon(1e-3));
  const Interval none = wilson_interval(0, 20);
  CHECK(none.lo == 0.0);
  CHECK(none.hi > 0.0);

  const std::vector<std::uint64_t> flat{100, 100, 100, 100};
  const ChiSquare fit = chi_square_uniform(flat);
  CHECK(fit.statistic == 0.0);
  CHECK(fit.dof == 3);
  CHECK(fit.p_value == doctest::Approx(1.0));
  const std::vector<std::uint64_t> skew{400, 0, 0, 0};
  CHECK(chi_square_uniform(skew).p_value < 1e-10);

  const std::vector<double> xs{1, 2, 3, 4};
  CHECK(mean_of(xs) == 2.5);
  CHECK(variance_of(xs) == doctest::Approx(5.0 / 3.0));

  // Poisson(1) histogram with exact expectations fits perfectly.
  std::vector<std::uint64_t> hist;
  for (int k = 0; k < 8; ++k) hist.push_back(static_cast<std::uint64_t>(std::round(1e5 * std::exp(-1.0) / std::tgamma(k + 1))));
  CHECK(chi_square_poisson(hist, 1.0).p_value > 0.5);
}

TEST_CASE("parallel_for covers every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 3, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS(parallel_for(10, 2, [](std::size_t i) {
    if (i == 7) throw std::runtime_error("boom");
  }));
}

TEST_CASE("worker_count honours HAMCOND_THREADS") {
  setenv("HAMCOND_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  setenv("HAMCOND_THREADS", "0", 1);
  CHECK(worker_count() >= 1);
  unsetenv("HAMCOND_THREADS");
  CHECK(worker_count() >= 1);
}

TEST_CASE("config validation") {
  ExperimentConfig config;
  config.n = 100;
  config.c_values = {0};
  config.trials = 0;
  CHECK_THROWS_AS(config.validate(), Error);
  config.trials = 1;
  CHECK_NOTHROW(config.validate());
  config.c_values = {-200};
  CHECK_THROWS_AS(config.validate(), Error);
}

TEST_CASE("sweeps are reproducible and thread-independent") {
  ExperimentConfig config;
  config.n = 300;
  config.c_values = {-1, 1};
  config.trials = 12;
  config.seed = 42;
  config.policy.exact_fallback = false;
  config.threads = 1;
  const ExperimentResult a = run_threshold(config);
  config.threads = 4;
  const ExperimentResult b = run_threshold(config);
  REQUIRE(a.records.size() == 24);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].seed == trial_seed(42, i));
    CHECK(a.records[i].seed == b.records[i].seed);
    CHECK(a.records[i].engine == b.records[i].engine);
    CHECK(a.records[i].failed_phases == b.records[i].failed_phases);
  }
  std::ostringstream ca, cb;
  write_csv(ca, a);
  write_csv(cb, b);
  CHECK(ca.str() == cb.str());
  CHECK(ca.str().rfind("n,c,m,trials,p_hat,lo95,hi95,prediction\n", 0) == 0);

  // Aggregates recompute from the records alone.
  const auto again = aggregate(config, ExperimentKind::Threshold, a.records);
  REQUIRE(again.size() == a.points.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].successes == a.points[i].successes);
    CHECK(again[i].p_hat == a.points[i].p_hat);
    CHECK(again[i].p_hat >= 0);
    CHECK(again[i].p_hat <= 1);
  }

  Json ja = to_json(a), jb = to_json(b);
  for (auto* j : {&ja, &jb}) {
    for (auto& rec : (*j)["records"]) rec.erase("metadata");
  }
  CHECK(ja == jb);
}

TEST_CASE("matching and obstruction sweeps") {
  ExperimentConfig config;
  config.n = 400;
  config.c_values = {0, 3};
  config.trials = 20;
  config.seed = 7;
  config.engine = true;
  config.policy.exact_fallback = false;
  const ExperimentResult matching = run_matching_threshold(config);
  for (const auto& p : matching.points) {
    CHECK(p.prediction == limit_probability(p.c));
    REQUIRE(p.engine_rate);
    CHECK(p.p_hat >= *p.engine_rate);
  }

  const ExperimentResult obstruction = run_obstruction_law(config);
  for (const auto& p : obstruction.points) {
    std::uint64_t mass = 0;
    for (auto h : p.obstruction_histogram) mass += h;
    CHECK(mass == p.valid);
    CHECK(p.obstruction_zero >= 0);
    CHECK(p.obstruction_zero <= 1);
  }
}

TEST_CASE("uniformity on tiny supports") {
  const UniformityReport one = run_uniformity(2, 2, 200, 1);
  CHECK(one.support == 1);
  CHECK(one.counts == std::vector<std::uint64_t>{200});
  CHECK(one.invalid_samples == 0);

  const UniformityReport six = run_uniformity(3, 5, 1200, 2);
  CHECK(six.support == 6);
  CHECK(six.invalid_samples == 0);
  CHECK(six.chi2.p_value > 1e-3);
}

TEST_CASE("switching sampler follows its exact law at n = 3, m = 4") {
  // Propagating the pairing law through the switches by hand: the three
  // digraphs made of two 2-cycles at one vertex (enumeration indices 0, 4, 8)
  // get weight 33/35 of uniform, the other six 36/35.
  const std::size_t samples = 45'000;
  const UniformityReport r = run_uniformity(3, 4, samples, 4);
  REQUIRE(r.support == 9);
  std::vector<double> observed, expected;
  for (std::size_t k = 0; k < 9; ++k) {
    observed.push_back(static_cast<double>(r.counts[k]));
    expected.push_back(samples / 9.0 * (k % 4 == 0 ? 33.0 : 36.0) / 35.0);
  }
  CHECK(chi_square(observed, expected).p_value > 1e-3);
}

TEST_CASE("equivalence report bookkeeping") {
  const EquivalenceReport r = run_equivalence(30, 90, 40, 3);
  CHECK(r.trials == 40);
  CHECK(r.decided + r.budget_exhausted == 40);
  CHECK(r.certificate_violations == 0);
  CHECK(r.disagreements == r.disagreeing_seeds.size());
  CHECK(r.disagreement_fraction >= 0);
}
