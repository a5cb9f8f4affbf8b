#ifndef UAEC_CONFIG_HPP
#define UAEC_CONFIG_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uaec/experiments.hpp"

namespace uaec {

// A fully resolved experiment description: JSON parsed, generators
// expanded, widths checked. All Errc::config failures carry the offending
// field path.
struct ExperimentConfig {
  MachineConfig machine;  // aux always empty; conditionals derive from it
  std::optional<Cosmos> cosmos;
  std::size_t block_width = 0;
  std::size_t n_max = 12;

  std::map<std::string, SubstrateSet> substrates;
  std::map<std::string, Scenario> scenarios;
  std::vector<AgentTimeline> timelines;
  UtilitySpec utility;

  double threshold_low = 0.1;
  double threshold_high = 0.5;
  CoarsenOp coarsen_op = CoarsenOp::even_subsample;
  struct ResolutionTriple {
    MindState a, b, c;
  };
  std::optional<ResolutionTriple> resolution;
  double g = 1.0;
  std::string nid_over = "R";

  // Per-kind substrate/scenario name bindings (all defaulted).
  std::string sim_s = "S", sim_r = "R";
  std::string tri_r = "R", tri_s = "S";
  std::string gfit_set = "A";
  std::string tele_name = "tele", stay_name = "stay";

  std::string raw_bytes;  // exact file content, for the inputs digest

  const SubstrateSet& substrate(const std::string& name) const;
  const Scenario& scenario(const std::string& name) const;
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(const std::string& text);

}  // namespace uaec

#endif  // UAEC_CONFIG_HPP
