#include "uaec/prior.hpp"

#include <cmath>
#include <unordered_set>

#include "uaec/errors.hpp"

namespace uaec {

PriorEstimate m_hat(const RunSet& rs, const Bits& x) {
  require_bits(x, "x");
  Dyadic sum;
  for (const auto& rec : rs.records)
    if (rec.status == RunStatus::Halted && rec.output == x)
      sum += Dyadic::pow2_neg(static_cast<int>(rec.consumed_prefix.size()));
  return PriorEstimate{sum, PriorKind::discrete, caps_of(rs), x};
}

PriorEstimate M_hat(const RunSet& rs, const Bits& x) {
  require_bits(x, "x");
  if (x.empty())
    // Zero output bits are matched at the root, before any bit is consumed.
    return PriorEstimate{Dyadic::one(), PriorKind::monotone, caps_of(rs), x};

  // A crediting node is shared by every record whose path runs through it;
  // dedupe by the consumed prefix at the emission moment.
  std::unordered_set<Bits> nodes;
  Dyadic sum;
  for (const auto& rec : rs.records) {
    if (rec.output.size() < x.size()) continue;
    if (rec.output.compare(0, x.size(), x) != 0) continue;
    std::uint32_t c = rec.emission_profile[x.size() - 1];
    Bits node = rec.consumed_prefix.substr(0, c);
    if (nodes.insert(std::move(node)).second)
      sum += Dyadic::pow2_neg(static_cast<int>(c));
  }
  return PriorEstimate{sum, PriorKind::monotone, caps_of(rs), x};
}

PriorEstimate m_cond_hat(const RunSet& rs_y, const Bits& x) {
  PriorEstimate est = m_hat(rs_y, x);
  est.kind = PriorKind::conditional;
  return est;
}

PriorEstimate m_nat_hat(const RunSet& rs, std::uint64_t n) {
  if (n < 1) fail(Errc::domain, "natural subject must be >= 1");
  PriorEstimate est = m_hat(rs, nat_to_bits(n));
  est.kind = PriorKind::natural;
  est.subject = std::to_string(n);
  return est;
}

double K_hat(const RunSet& rs, const Bits& x) {
  Dyadic m = m_hat(rs, x).value;
  if (m.is_zero())
    fail(Errc::unsupported_subject,
         "no halting program outputs \"" + x + "\" within caps");
  return -std::log2(m.to_double());
}

PriorEstimate m_pair_hat(const RunSet& rs, const Bits& a, const Bits& b,
                         std::size_t width) {
  if (a.size() != width || b.size() != width)
    fail(Errc::width_mismatch, "pair members must both have the stated width");
  return m_hat(rs, a + b);
}

}  // namespace uaec
