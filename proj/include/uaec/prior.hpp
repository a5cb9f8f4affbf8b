#ifndef UAEC_PRIOR_HPP
#define UAEC_PRIOR_HPP

#include <cstdint>
#include <string>

#include "uaec/dyadic.hpp"
#include "uaec/enumerate.hpp"

namespace uaec {

struct Caps {
  std::uint32_t depth_cap = 0;
  std::uint32_t step_cap = 0;

  bool operator==(const Caps&) const = default;
};

inline Caps caps_of(const RunSet& rs) {
  return Caps{rs.config.depth_cap, rs.config.step_cap};
}

enum class PriorKind { discrete, monotone, conditional, natural };

// Exact lower bound of a universal-prior quantity under the fixed machine
// at the given caps. Raising either cap never decreases the value.
struct PriorEstimate {
  Dyadic value;
  PriorKind kind = PriorKind::discrete;
  Caps caps;
  std::string subject;  // the bit string, or the decimal integer for `natural`
};

// Discrete prior m(x): mass of Halted records whose output is exactly x.
PriorEstimate m_hat(const RunSet& rs, const Bits& x);

// Monotone prior M(x): mass 2^-c credited at each tree node where the
// |x|-th output bit has just been emitted and the emitted bits equal x
// (c = bits consumed at that moment). Nodes are deduplicated across the
// records that share them; the empty string is matched at the root with
// mass one.
PriorEstimate M_hat(const RunSet& rs, const Bits& x);

// Conditional prior m(x|y): m_hat evaluated on a RunSet whose aux tape
// is y. With y empty this is literally the unconditional machine.
PriorEstimate m_cond_hat(const RunSet& rs_y, const Bits& x);

// Prior over positive integers, m(n) := m(bijective binary of n).
PriorEstimate m_nat_hat(const RunSet& rs, std::uint64_t n);

// Coding-theorem complexity proxy, -log2 m_hat(x).
// Errc::unsupported_subject when no program was found within caps.
double K_hat(const RunSet& rs, const Bits& x);

// Joint prior over fixed-width pairs: m_hat(a + b) with |a| = |b| = width.
PriorEstimate m_pair_hat(const RunSet& rs, const Bits& a, const Bits& b,
                         std::size_t width);

}  // namespace uaec

#endif  // UAEC_PRIOR_HPP
