#ifndef UAEC_EXPERIMENTS_HPP
#define UAEC_EXPERIMENTS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uaec/cosmos.hpp"

namespace uaec {

// Pluggable toy utility over mind-states, valued in [-1, 1].
struct UtilitySpec {
  enum class Kind { popcount_fraction, constant_one, lookup_table };

  Kind kind = Kind::constant_one;
  std::map<Bits, double> table;  // lookup_table only

  // Errc::config for an out-of-range table entry; Errc::domain when a
  // looked-up state is missing (the table must be total over the states
  // an experiment touches).
  void validate() const;
  double value(const MindState& b) const;
};

// Expected total utility of a: sum over b of w(b|a) u(b), with b ranging
// over the blocks that occur in the posterior runs.
double v_hat(const RunSet& rs, const MindState& a, const UtilitySpec& u,
             std::size_t n_max);

// The same quantity summed in the other order: posterior expectation of
// the discounted utility stream. Equal to v_hat by exact algebra; kept
// separate as a cross-check.
double v_hat_direct(const RunSet& rs, const MindState& a, const UtilitySpec& u,
                    std::size_t n_max);

// A pair of mind-states (before, after) with a scenario probability.
struct ScenarioPair {
  MindState a;
  MindState b;
  double probability = 0;
};

struct Scenario {
  std::string label;
  std::vector<ScenarioPair> pairs;

  // Probabilities must be >= 0 and sum to one within 1e-12.
  void validate() const;
};

struct TeleportPairDiag {
  Bits a;
  Bits b;
  double probability = 0;
  double weight = 0;
  bool excluded = false;
};

struct TeleportReport {
  double ratio = 0;
  double e_tele = 0;
  double e_stay = 0;
  std::vector<TeleportPairDiag> tele_pairs;
  std::vector<TeleportPairDiag> stay_pairs;
  std::size_t excluded = 0;
  Dyadic gamma_tail;
  // Reading aid printed with every report: near one the move is
  // acceptable, near zero it should be avoided.
  static const char* interpretation();
};

// E_tele[w(B|A)] / E_stay[w(B|A)], expectations over scenario
// probabilities. Pairs whose A has zero evidence are excluded and
// counted. Errc::zero_denominator when the stay expectation is zero.
TeleportReport teleport_ratio(const RunSet& rs, const Scenario& tele,
                              const Scenario& stay, std::size_t n_max);

// One agent's mind-states through (tape) time.
struct AgentTimeline {
  std::string agent_id;
  std::vector<MindState> states;
};

struct AzTerm {
  std::string agent_id;
  std::size_t t = 0;  // 1-indexed position in the timeline
  double num = 0;     // mean cross-agent future weight
  double den = 0;     // mean own-future weight
  bool defined = false;
  std::string skip_reason;  // empty when defined
};

struct AzReport {
  double product_form = 0;
  double geomean_form = 0;
  std::vector<AzTerm> per_term;
  std::size_t terms_defined = 0;
  std::size_t terms_excluded = 0;
  std::size_t weights_excluded = 0;  // individual w() terms dropped
  Dyadic gamma_tail;
};

// The egoism-vs-utilitarianism statistic: per (agent, T), the ratio of
// the mean weight assigned to other agents' later states over the mean
// weight assigned to the agent's own later states; product over all
// defined terms, and that product re-scaled to a geometric mean.
// Timelines are taken as given; disjointness across agents is enforced
// by the config layer, not here, so mirrored-timeline identities can be
// tested. Errc::degenerate when no term is defined.
AzReport a_z(const RunSet& rs, const std::vector<AgentTimeline>& timelines,
             std::size_t n_max);

enum class Verdict { egoism_leaning, indeterminate, utilitarian_leaning };

const char* verdict_name(Verdict v);

// Threshold read of the geometric-mean form. The defaults (0.1 / 0.5)
// are tool policy, configurable and always printed with the verdict.
Verdict ethics_verdict(const AzReport& report, double low = 0.1,
                       double high = 0.5);

enum class CoarsenOp { even_subsample, pairwise_xor };

// Halves the resolution of a mind-state: keep even-index bits, or XOR
// adjacent bit pairs. Both are computable from the high-resolution state
// by one program shared across all states. pre: even width.
MindState coarsen(const MindState& x, CoarsenOp op);

struct ResolutionReport {
  double hi_ratio = 0;
  double lo_ratio = 0;
  double log2_deviation = 0;
  CoarsenOp op = CoarsenOp::even_subsample;
};

// Compares the weight ratio w(c|a)/w(b|a) at width l against the same
// ratio for the coarsened states at width l/2. Errc::zero_weight names
// the first vanishing weight.
ResolutionReport resolution_check(const RunSet& rs, const MindState& a,
                                  const MindState& b, const MindState& c,
                                  CoarsenOp op, std::size_t n_max);

}  // namespace uaec

#endif  // UAEC_EXPERIMENTS_HPP
