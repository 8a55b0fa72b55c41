#pragma once

#include "json.hpp"

#include "hamcond/counting.hpp"
#include "hamcond/experiments.hpp"
#include "hamcond/hamilton.hpp"
#include "hamcond/sampler.hpp"

namespace hamcond {

using Json = nlohmann::ordered_json;

/// Keys delta, loops, multis, s1, small, switches.
Json to_json(const Diagnostics& diag);
Json to_json(const HamiltonTrace& trace);
/// {found, status, cycle, trace}
Json to_json(const HamiltonResult& result);
Json to_json(const CountReport& report);
Json to_json(const TrialRecord& record);
Json to_json(const PointSummary& point);
/// Per-trial runtimes live under "metadata" keys, the only
/// non-reproducible fields.
Json to_json(const ExperimentResult& result);
Json to_json(const UniformityReport& report);
Json to_json(const EquivalenceReport& report);

/// Integers that fit 64 bits become JSON numbers, larger ones strings.
Json big_integer(const mpz_class& value);

}  // namespace hamcond
