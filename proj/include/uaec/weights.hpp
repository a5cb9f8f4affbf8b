#ifndef UAEC_WEIGHTS_HPP
#define UAEC_WEIGHTS_HPP

#include <cstdint>
#include <vector>

#include "uaec/prior.hpp"

namespace uaec {

// A fixed-width bit string standing in for the state of a mind at one
// moment. The width is the experiment-level block width; everything
// compared within one experiment shares it.
struct MindState {
  Bits bits;

  MindState() = default;
  explicit MindState(Bits b) : bits(std::move(b)) {}

  std::size_t width() const { return bits.size(); }

  bool operator==(const MindState&) const = default;
  bool operator<(const MindState& o) const { return bits < o.bits; }
};

// A record's output split into consecutive width-l blocks (incomplete
// tail dropped), with the consumed-bit count at the completion of each.
struct SequenceView {
  const RunRecord* run = nullptr;
  std::vector<MindState> blocks;
  std::vector<std::uint32_t> block_credits;
};

SequenceView blocks_of(const RunRecord& rec, std::size_t width);

// Discount weights gamma_n = m_nat_hat(n) for n = 1..n_max; gammas[0] is
// unused so gammas[n] is gamma_n.
std::vector<Dyadic> gamma_table(const RunSet& rs, std::size_t n_max);

// Mass of the truncated discount sum and its tail bound 1 - that.
struct GammaMass {
  Dyadic truncated;
  Dyadic tail_bound;
};
GammaMass gamma_mass(const RunSet& rs, std::size_t n_max);

// P(sigma_n = a): mass 2^-c credited at the deduplicated tree node where
// block n is completed and equals a.
Dyadic p_sigma_n(const RunSet& rs, std::size_t n, const MindState& a);

// P(sigma_N = a) truncated at n_max, with the discount tail bound.
struct SigmaNEstimate {
  Dyadic value;
  Dyadic tail_bound;
  std::size_t n_max = 0;
};
SigmaNEstimate p_sigma_N(const RunSet& rs, const MindState& a, std::size_t n_max);

// Bayes-updated distribution over records given sigma_N = a. Mass of a
// record is 2^-|prefix| * sum_n gamma_n [block_n = a]; masses divided by
// the evidence sum to one exactly. Errc::zero_evidence when the evidence
// is zero.
struct PosteriorRun {
  std::size_t record_index = 0;
  Dyadic mass;        // before normalization
  double weight = 0;  // mass / evidence
};
struct Posterior {
  std::vector<PosteriorRun> runs;
  Dyadic evidence;  // P(sigma_N = a)
};
Posterior posterior_runs(const RunSet& rs, const MindState& a, std::size_t n_max);

// A weight estimate kept as an exact dyadic fraction num/den next to its
// rounded real value.
struct WeightValue {
  Dyadic num;
  Dyadic den;
  double value = 0;
};

// w(b|a) by its definition: posterior-expected discounted count of b,
// computed record by record from posterior_runs.
WeightValue weight_definitional(const RunSet& rs, const MindState& a,
                                const MindState& b, std::size_t n_max);

// The same quantity through the independent route: for every index pair
// (i, j) the joint event (block_i = a, block_j = b) is credited 2^-c at
// its deduplicated completion node and weighted gamma_i * gamma_j. Equal
// to weight_definitional by exact algebra; the two implementations share
// no summation code.
WeightValue weight_chain(const RunSet& rs, const MindState& a,
                         const MindState& b, std::size_t n_max);

// Fast proxy m(a,b)/m(a). Errc::zero_denominator when m(a) = 0.
double weight_fast(const RunSet& rs, const MindState& a, const MindState& b);

// Conditional proxy m(b|a), evaluated on a RunSet built with aux = a.
double weight_cond(const RunSet& rs_a, const MindState& b);

// The three estimators side by side. No equality between them is claimed;
// they are reported together as diagnostics.
struct WeightReport {
  double definitional = 0;
  double fast_ratio = 0;
  double conditional = 0;
  Caps caps;
};
WeightReport weight_report(RunSetProvider& provider, const MindState& a,
                           const MindState& b, std::size_t n_max);

// Normalized information distance
//   max{K(a|b), K(b|a)} / max{K(a), K(b)}
// from coding-theorem proxies; symmetric by construction, may slightly
// exceed one under approximation. Errc::unsupported_subject if any of the
// four priors vanishes.
double nid(RunSetProvider& provider, const MindState& a, const MindState& b);

// Mutual algorithmic information K(a) - K(a|b); may be negative under
// approximation and is reported as-is.
double mutual_info(RunSetProvider& provider, const MindState& a,
                   const MindState& b);

}  // namespace uaec

#endif  // UAEC_WEIGHTS_HPP
