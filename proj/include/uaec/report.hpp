#ifndef UAEC_REPORT_HPP
#define UAEC_REPORT_HPP

#include <string>

#include <json.hpp>

#include "uaec/config.hpp"

namespace uaec {

using Json = nlohmann::ordered_json;

// Runs one experiment kind against a cache-backed RunSet family and
// returns the full report: envelope (tool/machine versions, caps, inputs
// digest) plus per-kind values and diagnostics. Reports are deterministic
// functions of (config, caches, tool version); reruns serialize
// byte-identically.
//
// Kinds: teleport | simulation | ethics | resolution | triangle | gfit,
// plus the composite "pipeline" (simulation + teleport + ethics +
// triangle + NID matrix in one report).
Json run_experiment(const std::string& kind, const ExperimentConfig& cfg,
                    RunSetProvider& provider);

// Serialization used everywhere a report leaves the process: 2-space
// indent and a trailing newline, so files and stdout agree byte for byte.
std::string report_to_string(const Json& report);

// Flat CSV rendering of a report: scalar paths as `path,value` rows,
// arrays of objects as sectioned tables.
std::string report_to_csv(const Json& report);

// Spearman rank correlation; ties get average ranks. NaN for n < 2.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace uaec

#endif  // UAEC_REPORT_HPP
