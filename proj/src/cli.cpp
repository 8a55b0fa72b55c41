#include "hamcond/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "hamcond/counting.hpp"
#include "hamcond/edge_list.hpp"
#include "hamcond/error.hpp"
#include "hamcond/experiments.hpp"
#include "hamcond/hamilton.hpp"
#include "hamcond/oracle.hpp"
#include "hamcond/sampler.hpp"
#include "hamcond/serialization.hpp"

namespace hamcond {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  std::string profile = "desk";
  std::string out_path;
  std::string format;
};

// Output sink: --out file or the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open '" + path + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  if (format.empty()) return;
  for (const char* a : allowed) {
    if (format == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : "|") + a;
  throw UsageError("--format " + format + " is not available here (use " + list + ")");
}

Profile profile_of(const Common& c) {
  try {
    return parse_profile(c.profile);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

void add_common(CLI::App* sub, Common& c, bool stochastic) {
  auto* seed = sub->add_option("--seed", c.seed, "64-bit seed; identical seed and flags give identical output");
  if (stochastic) seed->required();
  sub->add_option("--profile", c.profile, "constant profile: paper|desk")->check(CLI::IsMember({"paper", "desk"}));
  sub->add_option("--out", c.out_path, "write the primary output to this file instead of stdout");
  sub->add_option("--format", c.format, "json|csv|edgelist (subcommand-dependent)");
}

std::vector<Vertex> read_cycle_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open cycle file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  // Accepts whitespace lists and JSON arrays alike.
  std::replace_if(text.begin(), text.end(), [](char ch) { return ch == '[' || ch == ']' || ch == ','; }, ' ');
  std::istringstream tokens(text);
  std::vector<Vertex> cycle;
  std::string token;
  while (tokens >> token) {
    if (token.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorCode::ParseError, "cycle file: '" + token + "' is not a vertex id");
    }
    cycle.push_back(static_cast<Vertex>(std::stoul(token)));
  }
  return cycle;
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError:
    case ErrorCode::LoopPresent:
    case ErrorCode::ParallelPresent:
    case ErrorCode::DomainError:
      return kExitUsage;
    default:
      return kExitCap;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random digraphs with min in/out-degree >= 1: sampling, Hamilton cycles, counting, experiments"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  Common common;

  // sample
  auto* sample = app.add_subcommand("sample", "draw a simple digraph with n vertices, m arcs, min degree >= 1");
  Vertex s_n = 0;
  std::size_t s_m = 0;
  sample->add_option("--n", s_n, "vertex count")->required();
  sample->add_option("--m", s_m, "arc count (m >= n)")->required();
  add_common(sample, common, true);
  sample->footer(
      "Output (edgelist, default): header `n m`, then one `u v` line per arc, 0-indexed.\n"
      "Diagnostics JSON {delta, loops, multis, s1, small, switches, retries} goes to <out>.diagnostics.json\n"
      "with --out, else to stderr. --format json prints {n, m, edges, diagnostics} instead.");

  // hamilton
  auto* ham = app.add_subcommand("hamilton", "search for a Hamilton cycle (phases 0-3, then fallbacks)");
  Vertex h_n = 0;
  std::size_t h_m = 0;
  std::string h_in;
  HamiltonPolicy policy;
  bool no_exact = false;
  ham->add_option("--n", h_n, "vertex count (sampled input)");
  ham->add_option("--m", h_m, "arc count (sampled input)");
  ham->add_option("--in", h_in, "read the digraph from an edge-list file instead of sampling");
  ham->add_option("--max-restarts", policy.max_restarts, "fresh-partition restarts after a phase failure")
      ->capture_default_str();
  ham->add_option("--exact-limit", policy.exact_limit, "largest n handed to the exact oracle")->capture_default_str();
  ham->add_option("--exact-budget", policy.exact_budget, "backtracking node budget")->capture_default_str();
  ham->add_flag("--no-exact", no_exact, "never consult the exact oracle");
  add_common(ham, common, true);
  ham->footer(
      "Output: JSON {found, status, cycle, trace}. status is found | obstruction_found |\n"
      "exact_negative | engine_gave_up. Exit 0 found, 1 certified negative, 3 gave up.");

  // count
  auto* count = app.add_subcommand("count", "exact and asymptotic counts of digraphs with min degree >= 1");
  Vertex c_n = 0;
  std::size_t c_m = 0;
  bool c_exact = false;
  count->add_option("--n", c_n, "vertex count")->required();
  count->add_option("--m", c_m, "arc count (m > n)")->required();
  count->add_flag("--exact", c_exact, "also compute the exact count (enumeration or inclusion-exclusion)");
  add_common(count, common, false);
  count->footer(
      "Output: JSON CountReport {n, m, z, sigma2, exact_count, exact_method, log_exact,\n"
      "asymptotic: [{name, log_value, log_ratio}], selected, ratio, omega1: {exact, log_exact,\n"
      "log_factorized, ratio}}. Variants: printed, reconciled, configuration.");

  // verify
  auto* verify = app.add_subcommand("verify", "check a Hamilton cycle against a digraph");
  std::string v_in, v_cycle;
  verify->add_option("--in", v_in, "edge-list file")->required();
  verify->add_option("--cycle", v_cycle, "cycle file: vertex ids, whitespace- or JSON-array separated")->required();
  add_common(verify, common, false);
  verify->footer("Output: JSON {verdict: bool, n, length}. Exit 0 when valid, 1 when not.");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Monte Carlo experiments");
  std::string kind;
  Vertex e_n = 0;
  std::size_t e_m = 0;
  std::vector<double> e_c{0.0};
  std::size_t e_trials = 100;
  std::string e_json, e_gnuplot;
  bool e_exact = false, e_no_fallback = false;
  std::uint64_t e_budget = 20'000'000;
  exp->add_option("kind", kind, "threshold|matching|obstruction|uniformity|equivalence")
      ->required()
      ->check(CLI::IsMember({"threshold", "matching", "obstruction", "uniformity", "equivalence"}));
  exp->add_option("--n", e_n, "vertex count")->required();
  exp->add_option("--m", e_m, "arc count (uniformity, equivalence; else derived from c)");
  exp->add_option("--c", e_c, "comma-separated c values, m = ceil((n/2)(log n + 2 log log n + c))")
      ->delimiter(',')
      ->allow_extra_args(false);
  exp->add_option("--trials", e_trials, "trials per point (samples for uniformity)")->capture_default_str();
  exp->add_option("--json", e_json, "JSON sidecar with per-trial records");
  exp->add_option("--gnuplot", e_gnuplot, "write a gnuplot script for the CSV to this path");
  exp->add_flag("--exact", e_exact, "also run the exact oracle per trial (n <= exact limit)");
  exp->add_flag("--no-fallback", e_no_fallback, "threshold: disable the engine's exact fallback");
  exp->add_option("--exact-budget", e_budget, "backtracking node budget (equivalence)")->capture_default_str();
  add_common(exp, common, true);
  exp->footer(
      "Output: threshold|matching|obstruction print CSV n,c,m,trials,p_hat,lo95,hi95,prediction (default)\n"
      "or the full JSON with --format json; uniformity|equivalence print a JSON report.\n"
      "Worker pool size: HAMCOND_THREADS (default: logical CPUs).");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n"
        << "hint: run 'hamcond --help' or 'hamcond <subcommand> --help'\n";
    return kExitUsage;
  }

  try {
    if (sample->parsed()) {
      require_format(common.format, {"edgelist", "json"});
      const Profile profile = profile_of(common);
      Rng rng(common.seed);
      const SampledDigraph s = sample_simple_digraph(s_n, s_m, rng, Parameters::for_profile(profile, s_n, s_m));
      Json diag = to_json(s.diagnostics);
      diag["retries"] = s.retries;
      Sink sink(common.out_path, out);
      if (common.format == "json") {
        Json edges = Json::array();
        for (const Edge& e : s.digraph.edges()) edges.push_back({e.tail, e.head});
        *sink << Json{{"n", s_n}, {"m", s_m}, {"edges", edges}, {"diagnostics", diag}}.dump(2) << "\n";
      } else {
        write_edge_list(*sink, s.digraph);
        if (common.out_path.empty()) {
          err << diag.dump() << "\n";
        } else {
          std::ofstream side(common.out_path + ".diagnostics.json");
          side << diag.dump(2) << "\n";
        }
      }
      return kExitOk;
    }

    if (ham->parsed()) {
      require_format(common.format, {"json"});
      const Profile profile = profile_of(common);
      Rng rng(common.seed);
      Digraph d;
      if (!h_in.empty()) {
        d = read_edge_list_file(h_in);
      } else {
        if (h_n == 0 || h_m == 0) throw UsageError("give --n and --m, or --in FILE");
        d = sample_simple_digraph(h_n, h_m, rng, Parameters::for_profile(profile, h_n, h_m)).digraph;
      }
      if (no_exact) policy.exact_fallback = false;
      Sink sink(common.out_path, out);
      if (d.vertex_count() == 0 || d.min_degree() < 1) {
        *sink << Json{{"found", false}, {"status", "degree_zero_vertex"}, {"cycle", Json::array()}, {"trace", nullptr}}
                     .dump(2)
              << "\n";
        return kExitNegative;
      }
      const Parameters params = Parameters::for_profile(profile, d.vertex_count(), d.edge_count());
      const HamiltonResult result = find_hamilton(d, params, rng, policy);
      *sink << to_json(result).dump(2) << "\n";
      switch (result.status) {
        case HamiltonStatus::Found: return kExitOk;
        case HamiltonStatus::ObstructionFound:
        case HamiltonStatus::ExactNegative: return kExitNegative;
        case HamiltonStatus::EngineGaveUp: return kExitCap;
      }
      return kExitCap;
    }

    if (count->parsed()) {
      require_format(common.format, {"json"});
      if (c_n == 0 || c_m <= c_n) throw UsageError("count needs m > n >= 1");
      if (c_exact && c_n > 2000) {
        throw Error(ErrorCode::TooLarge, "exact counting is limited to n <= 2000");
      }
      const CountReport report = count_asymptotic(c_n, c_m, c_exact);
      Sink sink(common.out_path, out);
      *sink << to_json(report).dump(2) << "\n";
      return kExitOk;
    }

    if (verify->parsed()) {
      require_format(common.format, {"json"});
      const Digraph d = read_edge_list_file(v_in);
      const std::vector<Vertex> cycle = read_cycle_file(v_cycle);
      const bool ok = verify_hamilton_cycle(d, cycle);
      Sink sink(common.out_path, out);
      *sink << Json{{"verdict", ok}, {"n", d.vertex_count()}, {"length", cycle.size()}}.dump(2) << "\n";
      return ok ? kExitOk : kExitNegative;
    }

    if (exp->parsed()) {
      const Profile profile = profile_of(common);
      const unsigned threads = worker_count();
      if (kind == "uniformity" || kind == "equivalence") {
        require_format(common.format, {"json"});
        std::size_t m = e_m;
        if (m == 0) {
          if (kind == "uniformity") throw UsageError("uniformity needs --m");
          m = threshold_edges(e_n, e_c.front());
        }
        Json report;
        if (kind == "uniformity") {
          report = to_json(run_uniformity(e_n, m, e_trials, common.seed, profile, threads));
        } else {
          report = to_json(run_equivalence(e_n, m, e_trials, common.seed, profile, e_budget, threads));
        }
        Sink sink(common.out_path, out);
        *sink << report.dump(2) << "\n";
        return kExitOk;
      }
      require_format(common.format, {"csv", "json"});
      ExperimentConfig config;
      config.n = e_n;
      config.c_values = e_c;
      config.trials = e_trials;
      config.seed = common.seed;
      config.profile = profile;
      config.exact = e_exact;
      config.policy.exact_fallback = !e_no_fallback;
      config.threads = threads;
      ExperimentResult result;
      if (kind == "threshold") {
        result = run_threshold(config);
      } else if (kind == "matching") {
        result = run_matching_threshold(config);
      } else {
        result = run_obstruction_law(config);
      }
      {
        Sink sink(common.out_path, out);
        if (common.format == "json") {
          *sink << to_json(result).dump(2) << "\n";
        } else {
          write_csv(*sink, result);
        }
      }
      if (!e_json.empty()) {
        std::ofstream side(e_json);
        if (!side) throw UsageError("cannot open '" + e_json + "' for writing");
        side << to_json(result).dump(2) << "\n";
      }
      if (!e_gnuplot.empty()) {
        std::ofstream script(e_gnuplot);
        if (!script) throw UsageError("cannot open '" + e_gnuplot + "' for writing");
        write_gnuplot(script, result, common.out_path.empty() ? "results.csv" : common.out_path);
      }
      const bool invalid = std::any_of(result.points.begin(), result.points.end(), [](const auto& p) { return p.invalid; });
      if (invalid) {
        err << "warning: sampler failures reached 1% of trials at some point; run flagged invalid\n";
        return kExitCap;
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\nhint: see 'hamcond <subcommand> --help'\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (exit_for(e.code()) == kExitUsage) err << "hint: check the input values and files\n";
    return exit_for(e.code());
  }
  return kExitUsage;
}

}  // namespace hamcond
