#include "uaec/weights.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "uaec/errors.hpp"

namespace uaec {

namespace {

void require_same_width(const MindState& a, const MindState& b) {
  if (a.width() != b.width())
    fail(Errc::width_mismatch, "mind-states have widths " +
                                   std::to_string(a.width()) + " and " +
                                   std::to_string(b.width()));
}

void require_state(const MindState& a) {
  require_bits(a.bits, "mind-state");
  if (a.width() == 0) fail(Errc::domain, "mind-state width must be >= 1");
}

// True iff block n (1-indexed) of rec's output is complete and equals a.
bool block_matches(const RunRecord& rec, std::size_t n, const MindState& a) {
  std::size_t end = n * a.width();
  if (rec.output.size() < end) return false;
  return rec.output.compare(end - a.width(), a.width(), a.bits.data(),
                            a.width()) == 0;
}

}  // namespace

SequenceView blocks_of(const RunRecord& rec, std::size_t width) {
  if (width == 0) fail(Errc::domain, "block width must be >= 1");
  SequenceView view;
  view.run = &rec;
  std::size_t count = rec.output.size() / width;
  view.blocks.reserve(count);
  view.block_credits.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    view.blocks.emplace_back(rec.output.substr(i * width, width));
    view.block_credits.push_back(rec.emission_profile[(i + 1) * width - 1]);
  }
  return view;
}

std::vector<Dyadic> gamma_table(const RunSet& rs, std::size_t n_max) {
  if (n_max < 1) fail(Errc::domain, "n_max must be >= 1");
  std::vector<Dyadic> gammas(n_max + 1);
  for (std::size_t n = 1; n <= n_max; ++n)
    gammas[n] = m_nat_hat(rs, n).value;
  return gammas;
}

GammaMass gamma_mass(const RunSet& rs, std::size_t n_max) {
  Dyadic sum;
  for (const Dyadic& g : gamma_table(rs, n_max)) sum += g;
  return GammaMass{sum, Dyadic::one() - sum};
}

Dyadic p_sigma_n(const RunSet& rs, std::size_t n, const MindState& a) {
  require_state(a);
  if (n < 1) fail(Errc::domain, "block index must be >= 1");
  std::unordered_set<Bits> nodes;
  Dyadic sum;
  for (const auto& rec : rs.records) {
    if (!block_matches(rec, n, a)) continue;
    std::uint32_t c = rec.emission_profile[n * a.width() - 1];
    Bits node = rec.consumed_prefix.substr(0, c);
    if (nodes.insert(std::move(node)).second)
      sum += Dyadic::pow2_neg(static_cast<int>(c));
  }
  return sum;
}

SigmaNEstimate p_sigma_N(const RunSet& rs, const MindState& a,
                         std::size_t n_max) {
  auto gammas = gamma_table(rs, n_max);
  Dyadic value;
  Dyadic gamma_sum;
  for (std::size_t n = 1; n <= n_max; ++n) {
    gamma_sum += gammas[n];
    if (!gammas[n].is_zero()) value += gammas[n] * p_sigma_n(rs, n, a);
  }
  return SigmaNEstimate{value, Dyadic::one() - gamma_sum, n_max};
}

Posterior posterior_runs(const RunSet& rs, const MindState& a,
                         std::size_t n_max) {
  require_state(a);
  auto gammas = gamma_table(rs, n_max);
  Dyadic evidence = p_sigma_N(rs, a, n_max).value;
  if (evidence.is_zero())
    fail(Errc::zero_evidence,
         "P(sigma_N = \"" + a.bits + "\") is zero at these caps");

  Posterior post;
  post.evidence = evidence;
  double evidence_d = evidence.to_double();
  for (std::size_t r = 0; r < rs.records.size(); ++r) {
    const auto& rec = rs.records[r];
    Dyadic hits;
    for (std::size_t n = 1; n <= n_max; ++n)
      if (block_matches(rec, n, a)) hits += gammas[n];
    if (hits.is_zero()) continue;
    Dyadic mass =
        hits * Dyadic::pow2_neg(static_cast<int>(rec.consumed_prefix.size()));
    post.runs.push_back(PosteriorRun{r, mass, mass.to_double() / evidence_d});
  }
  return post;
}

WeightValue weight_definitional(const RunSet& rs, const MindState& a,
                                const MindState& b, std::size_t n_max) {
  require_same_width(a, b);
  auto gammas = gamma_table(rs, n_max);
  Posterior post = posterior_runs(rs, a, n_max);
  Dyadic num;
  for (const auto& pr : post.runs) {
    const auto& rec = rs.records[pr.record_index];
    Dyadic discounted_b;
    for (std::size_t j = 1; j <= n_max; ++j)
      if (block_matches(rec, j, b)) discounted_b += gammas[j];
    if (!discounted_b.is_zero()) num += pr.mass * discounted_b;
  }
  return WeightValue{num, post.evidence,
                     num.to_double() / post.evidence.to_double()};
}

WeightValue weight_chain(const RunSet& rs, const MindState& a,
                         const MindState& b, std::size_t n_max) {
  require_same_width(a, b);
  require_state(a);
  auto gammas = gamma_table(rs, n_max);
  Dyadic evidence = p_sigma_N(rs, a, n_max).value;
  if (evidence.is_zero())
    fail(Errc::zero_evidence,
         "P(sigma_N = \"" + a.bits + "\") is zero at these caps");

  Dyadic num;
  std::unordered_set<Bits> nodes;
  for (std::size_t i = 1; i <= n_max; ++i) {
    if (gammas[i].is_zero()) continue;
    for (std::size_t j = 1; j <= n_max; ++j) {
      if (gammas[j].is_zero()) continue;
      // Joint event (block_i = a, block_j = b): credited once per tree
      // node where the later of the two blocks is completed.
      std::size_t done = std::max(i, j);
      nodes.clear();
      Dyadic mass;
      for (const auto& rec : rs.records) {
        if (!block_matches(rec, i, a) || !block_matches(rec, j, b)) continue;
        std::uint32_t c = rec.emission_profile[done * a.width() - 1];
        Bits node = rec.consumed_prefix.substr(0, c);
        if (nodes.insert(std::move(node)).second)
          mass += Dyadic::pow2_neg(static_cast<int>(c));
      }
      if (!mass.is_zero()) num += gammas[i] * gammas[j] * mass;
    }
  }
  return WeightValue{num, evidence, num.to_double() / evidence.to_double()};
}

double weight_fast(const RunSet& rs, const MindState& a, const MindState& b) {
  require_same_width(a, b);
  Dyadic joint = m_pair_hat(rs, a.bits, b.bits, a.width()).value;
  Dyadic marginal = m_hat(rs, a.bits).value;
  if (marginal.is_zero())
    fail(Errc::zero_denominator, "m(\"" + a.bits + "\") is zero at these caps");
  return joint.to_double() / marginal.to_double();
}

double weight_cond(const RunSet& rs_a, const MindState& b) {
  require_state(b);
  return m_cond_hat(rs_a, b.bits).value.to_double();
}

WeightReport weight_report(RunSetProvider& provider, const MindState& a,
                           const MindState& b, std::size_t n_max) {
  const RunSet& rs = provider.get("");
  WeightReport rep;
  rep.caps = caps_of(rs);
  rep.definitional = weight_definitional(rs, a, b, n_max).value;
  rep.fast_ratio = weight_fast(rs, a, b);
  rep.conditional = weight_cond(provider.get(a.bits), b);
  return rep;
}

namespace {

double k_cond(RunSetProvider& provider, const MindState& x, const MindState& y) {
  return K_hat(provider.get(y.bits), x.bits);
}

}  // namespace

double nid(RunSetProvider& provider, const MindState& a, const MindState& b) {
  require_same_width(a, b);
  const RunSet& rs = provider.get("");
  double ka = K_hat(rs, a.bits);
  double kb = K_hat(rs, b.bits);
  double kab = k_cond(provider, a, b);
  double kba = k_cond(provider, b, a);
  double den = std::max(ka, kb);
  if (den <= 0)
    // Both strings have complexity zero only if both priors are one,
    // which a halting machine cannot reach; still, guard the division.
    fail(Errc::zero_denominator, "max{K(a), K(b)} is zero");
  return std::max(kab, kba) / den;
}

double mutual_info(RunSetProvider& provider, const MindState& a,
                   const MindState& b) {
  require_same_width(a, b);
  return K_hat(provider.get(""), a.bits) - k_cond(provider, a, b);
}

}  // namespace uaec
