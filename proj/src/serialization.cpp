#include "hamcond/serialization.hpp"

#include "hamcond/oracle.hpp"

namespace hamcond {

Json big_integer(const mpz_class& value) {
  if (value >= 0 && mpz_sizeinbase(value.get_mpz_t(), 2) <= 63) return static_cast<std::uint64_t>(value.get_ui());
  return value.get_str();
}

Json to_json(const Diagnostics& diag) {
  return Json{{"delta", diag.delta},   {"loops", diag.loops}, {"multis", diag.multis},
              {"s1", diag.s1},         {"small", diag.small}, {"switches", diag.switches}};
}

Json to_json(const HamiltonTrace& trace) {
  Json attempts = Json::array();
  for (const AttemptTrace& at : trace.attempts) {
    attempts.push_back({{"failed_phase", at.failed_phase.empty() ? Json(nullptr) : Json(at.failed_phase)},
                        {"e1", at.e1},
                        {"e2", at.e2},
                        {"e3", at.e3},
                        {"k2_vertices", at.k2},
                        {"k3_vertices", at.k3},
                        {"k2_edges", at.k2_edges},
                        {"k3_edges", at.k3_edges},
                        {"phase1_cycles", at.phase1_cycles},
                        {"phase2",
                         {{"small_cycles", at.phase2.small_cycles_initial},
                          {"eliminated", at.phase2.eliminated},
                          {"broken_edges_tried", at.phase2.broken_edges_tried},
                          {"tree_nodes", at.phase2.tree_nodes},
                          {"premature_closures", at.phase2.premature_closures}}},
                        {"phase3_merges", at.phase3_merges}});
  }
  Json j{{"restarts", trace.restarts},
         {"solved_by", trace.solved_by.empty() ? Json(nullptr) : Json(trace.solved_by)},
         {"attempts", attempts},
         {"obstruction_count", trace.obstruction_count},
         {"exact_consulted", trace.exact_consulted}};
  if (trace.exact_consulted) j["exact_verdict"] = trace.exact_verdict;
  return j;
}

Json to_json(const HamiltonResult& result) {
  return Json{{"found", result.found()},
              {"status", std::string(to_string(result.status))},
              {"cycle", result.cycle},
              {"trace", to_json(result.trace)}};
}

Json to_json(const CountReport& report) {
  Json variants = Json::array();
  for (const auto& v : report.variants) {
    variants.push_back({{"name", v.name},
                        {"log_value", v.log_value},
                        {"log_ratio", v.log_ratio ? Json(*v.log_ratio) : Json(nullptr)}});
  }
  return Json{{"n", report.n},
              {"m", report.m},
              {"z", report.z},
              {"sigma2", report.sigma2},
              {"exact_count", report.exact_count ? big_integer(*report.exact_count) : Json(nullptr)},
              {"exact_method", report.exact_method.empty() ? Json(nullptr) : Json(report.exact_method)},
              {"log_exact", report.log_exact ? Json(*report.log_exact) : Json(nullptr)},
              {"asymptotic", variants},
              {"selected", report.selected.empty() ? Json(nullptr) : Json(report.selected)},
              {"ratio", report.ratio ? Json(*report.ratio) : Json(nullptr)},
              {"omega1",
               {{"exact", big_integer(report.omega1_exact)},
                {"log_exact", report.log_omega1_exact},
                {"log_factorized", report.log_omega1_factorized},
                {"ratio", report.omega1_ratio}}}};
}

Json to_json(const TrialRecord& rec) {
  Json j{{"index", rec.index},
         {"seed", rec.seed},
         {"c", rec.c},
         {"m", rec.m},
         {"status", rec.status == TrialStatus::Ok ? "ok" : "sampler_failed"}};
  if (!rec.error.empty()) j["error"] = rec.error;
  if (rec.engine) {
    j["engine"] = {{"status", std::string(to_string(*rec.engine))},
                   {"cycle_verified", rec.cycle_verified},
                   {"restarts", rec.restarts},
                   {"failed_phases", rec.failed_phases},
                   {"solved_by", rec.solved_by.empty() ? Json(nullptr) : Json(rec.solved_by)}};
  }
  if (rec.exact) j["exact"] = std::string(to_string(*rec.exact));
  if (rec.matching) j["matching"] = *rec.matching;
  if (rec.obstruction) j["obstruction"] = *rec.obstruction;
  j["metadata"] = {{"runtime_ms", rec.runtime_ms}};
  return j;
}

Json to_json(const PointSummary& p) {
  Json j{{"n", p.n},
         {"c", p.c},
         {"m", p.m},
         {"trials", p.trials},
         {"valid", p.valid},
         {"sampler_failures", p.sampler_failures},
         {"invalid", p.invalid},
         {"successes", p.successes},
         {"p_hat", p.p_hat},
         {"lo95", p.ci.lo},
         {"hi95", p.ci.hi},
         {"prediction", p.prediction}};
  if (p.engine_rate) j["engine_rate"] = *p.engine_rate;
  if (p.matching_rate) j["matching_rate"] = *p.matching_rate;
  if (p.exact_rate) j["exact_rate"] = *p.exact_rate;
  if (p.exact_unknown) j["exact_unknown"] = p.exact_unknown;
  if (!p.obstruction_histogram.empty()) {
    j["obstruction"] = {{"histogram", p.obstruction_histogram},
                        {"mean", p.obstruction_mean},
                        {"variance", p.obstruction_variance},
                        {"zero_fraction", p.obstruction_zero},
                        {"poisson_mean", std::exp(-p.c) / 8.0}};
    if (p.obstruction_fit) {
      j["obstruction"]["chi2"] = {{"statistic", p.obstruction_fit->statistic},
                                  {"dof", p.obstruction_fit->dof},
                                  {"p_value", p.obstruction_fit->p_value}};
    }
  }
  j["invalid_cycles"] = p.invalid_cycles;
  return j;
}

Json to_json(const ExperimentResult& result) {
  const ExperimentConfig& c = result.config;
  Json points = Json::array(), records = Json::array();
  for (const auto& p : result.points) points.push_back(to_json(p));
  for (const auto& r : result.records) records.push_back(to_json(r));
  return Json{{"experiment", std::string(to_string(result.kind))},
              {"config",
               {{"n", c.n},
                {"c_values", c.c_values},
                {"trials", c.trials},
                {"seed", c.seed},
                {"profile", std::string(to_string(c.profile))},
                {"estimators",
                 {{"engine", c.engine}, {"exact", c.exact}, {"matching", c.matching}, {"obstruction", c.obstruction}}},
                {"policy",
                 {{"max_restarts", c.policy.max_restarts},
                  {"exact_fallback", c.policy.exact_fallback},
                  {"exact_limit", c.policy.exact_limit},
                  {"exact_budget", c.policy.exact_budget}}},
                {"seed_rule", "trial_seed(base, i) = mix64(base ^ mix64(i)), i = c_index * trials + trial"}}},
              {"points", points},
              {"records", records}};
}

Json to_json(const UniformityReport& r) {
  return Json{{"n", r.n},
              {"m", r.m},
              {"samples", r.samples},
              {"seed", r.seed},
              {"support", r.support},
              {"counts", r.counts},
              {"chi2", r.chi2.statistic},
              {"dof", r.chi2.dof},
              {"p_value", r.chi2.p_value},
              {"min_expected", r.min_expected},
              {"invalid_samples", r.invalid_samples}};
}

Json to_json(const EquivalenceReport& r) {
  return Json{{"n", r.n},
              {"m", r.m},
              {"trials", r.trials},
              {"seed", r.seed},
              {"decided", r.decided},
              {"budget_exhausted", r.budget_exhausted},
              {"hamiltonian", r.hamiltonian},
              {"with_obstruction", r.with_obstruction},
              {"disagreements", r.disagreements},
              {"certificate_violations", r.certificate_violations},
              {"disagreement_fraction", r.disagreement_fraction},
              {"disagreeing_seeds", r.disagreeing_seeds},
              {"unknown_seeds", r.unknown_seeds}};
}

}  // namespace hamcond
