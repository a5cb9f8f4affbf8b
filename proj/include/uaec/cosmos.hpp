#ifndef UAEC_COSMOS_HPP
#define UAEC_COSMOS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uaec/weights.hpp"

namespace uaec {

// The deterministic toy universe: an elementary cellular automaton trace.
// phi is the row-major concatenation of all rows including the seed.
struct Cosmos {
  int rule = 0;
  Bits seed_row;
  std::uint32_t steps = 0;
  Bits phi;
};

// Runs the standard elementary-CA local rule with cyclic boundary.
// pre: 0 <= rule <= 255, |seed_row| >= 3, steps >= 1.
Cosmos gen_phi(int rule, const Bits& seed_row, std::uint32_t steps);

// Mind-states that live on one substrate.
struct SubstrateSet {
  std::string label;
  std::vector<MindState> members;

  std::size_t width() const;  // uniform member width; validates
};

// Distinct width-l windows of phi in order of first appearance.
SubstrateSet windows_of(const Cosmos& cosmos, std::size_t width,
                        const std::string& label, std::size_t limit = 0);

// Each member bit doubled, truncated back to the original width: the
// built-in stand-in for a costlier extraction encoding.
SubstrateSet bit_double(const SubstrateSet& base, const std::string& label);

// Substrate-dependent factor: arithmetic mean of m(a|phi) over members.
// all_zero flags the degenerate case where every member estimate is zero.
struct SdfValue {
  double value = 0;
  bool all_zero = false;
};
SdfValue sdf(const RunSet& rs_phi, const SubstrateSet& z);

// |S| sdf(S) / |R| sdf(R) and the derived probability ratio/(1+ratio);
// the g M(phi) factor cancels exactly so neither is ever computed here.
struct SimulationResult {
  double ratio = 0;
  double p_sim = 0;
  SdfValue sdf_s;
  SdfValue sdf_r;
};
SimulationResult simulation_ratio(const RunSet& rs_phi, const SubstrateSet& s,
                                  const SubstrateSet& r);

// Log-domain least squares for the multiplicative constant g between
// paired positive quantities (lhs_a, rhs_a): log2 g is the mean of
// log2 lhs - log2 rhs, residual_gsd the exp of the standard deviation of
// the natural-log residuals.
struct GFit {
  double g = 0;
  double log2_g = 0;
  double residual_gsd = 1;
};
GFit fit_g_values(std::span<const std::pair<double, double>> pairs);

// Fits P(sigma_N = a) ~ g M(phi) m(a|phi) over the members of A.
// Errc::infeasible when M(phi) = 0 at these caps (phi too long to be
// reached by enumeration); callers then fall back to ratio formulas in
// which g M(phi) cancels.
GFit fit_g(const RunSet& rs, const RunSet& rs_phi, const Bits& phi,
           const SubstrateSet& a_set, std::size_t n_max);

// Cross-substrate weight average against the sdf ratio. lhs is the mean
// of w(a|b) over (a in R, b in S); bound_ratio = lhs sdf(S) / sdf(R),
// reported against g. Pairs whose conditioning state has zero evidence
// are excluded and counted, never silently dropped.
struct TriangleReport {
  double lhs = 0;
  double bound_ratio = 0;
  double g = 0;
  bool within_g = false;
  std::size_t pairs_total = 0;
  std::size_t pairs_excluded = 0;
  SdfValue sdf_r;
  SdfValue sdf_s;
};
TriangleReport triangle_check(RunSetProvider& provider, const Bits& phi,
                              const SubstrateSet& r, const SubstrateSet& s,
                              double g, std::size_t n_max);

}  // namespace uaec

#endif  // UAEC_COSMOS_HPP
