#include "uaec/cosmos.hpp"

#include <cmath>
#include <set>

#include "uaec/errors.hpp"

namespace uaec {

Cosmos gen_phi(int rule, const Bits& seed_row, std::uint32_t steps) {
  if (rule < 0 || rule > 255) fail(Errc::domain, "rule must be in [0, 255]");
  require_bits(seed_row, "seed_row");
  if (seed_row.size() < 3) fail(Errc::domain, "seed_row must have >= 3 cells");
  if (steps < 1) fail(Errc::domain, "steps must be >= 1");

  Cosmos cosmos{rule, seed_row, steps, seed_row};
  Bits row = seed_row;
  const std::size_t w = row.size();
  for (std::uint32_t t = 0; t < steps; ++t) {
    Bits next(w, '0');
    for (std::size_t i = 0; i < w; ++i) {
      int left = row[(i + w - 1) % w] == '1';
      int center = row[i] == '1';
      int right = row[(i + 1) % w] == '1';
      int idx = (left << 2) | (center << 1) | right;
      next[i] = (rule >> idx) & 1 ? '1' : '0';
    }
    cosmos.phi += next;
    row = std::move(next);
  }
  return cosmos;
}

std::size_t SubstrateSet::width() const {
  if (members.empty()) fail(Errc::domain, "substrate \"" + label + "\" is empty");
  std::size_t w = members.front().width();
  for (const auto& m : members)
    if (m.width() != w)
      fail(Errc::width_mismatch, "substrate \"" + label + "\" mixes widths");
  return w;
}

SubstrateSet windows_of(const Cosmos& cosmos, std::size_t width,
                        const std::string& label, std::size_t limit) {
  if (width == 0 || width > cosmos.phi.size())
    fail(Errc::domain, "window width must be in [1, |phi|]");
  SubstrateSet out;
  out.label = label;
  std::set<Bits> seen;
  for (std::size_t i = 0; i + width <= cosmos.phi.size(); ++i) {
    Bits w = cosmos.phi.substr(i, width);
    if (seen.insert(w).second) {
      out.members.emplace_back(std::move(w));
      if (limit && out.members.size() == limit) break;
    }
  }
  return out;
}

SubstrateSet bit_double(const SubstrateSet& base, const std::string& label) {
  std::size_t w = base.width();
  SubstrateSet out;
  out.label = label;
  out.members.reserve(base.members.size());
  for (const auto& m : base.members) {
    Bits doubled;
    doubled.reserve(2 * w);
    for (char c : m.bits) {
      doubled.push_back(c);
      doubled.push_back(c);
    }
    out.members.emplace_back(doubled.substr(0, w));
  }
  return out;
}

SdfValue sdf(const RunSet& rs_phi, const SubstrateSet& z) {
  z.width();  // validates non-empty and uniform
  double sum = 0;
  bool any = false;
  for (const auto& m : z.members) {
    double v = m_cond_hat(rs_phi, m.bits).value.to_double();
    sum += v;
    if (v > 0) any = true;
  }
  return SdfValue{sum / static_cast<double>(z.members.size()), !any};
}

SimulationResult simulation_ratio(const RunSet& rs_phi, const SubstrateSet& s,
                                  const SubstrateSet& r) {
  SimulationResult res;
  res.sdf_s = sdf(rs_phi, s);
  res.sdf_r = sdf(rs_phi, r);
  double den = static_cast<double>(r.members.size()) * res.sdf_r.value;
  if (den <= 0)
    fail(Errc::zero_denominator, "|R| sdf(R) is zero for \"" + r.label + "\"");
  res.ratio = static_cast<double>(s.members.size()) * res.sdf_s.value / den;
  res.p_sim = res.ratio / (1.0 + res.ratio);
  return res;
}

GFit fit_g_values(std::span<const std::pair<double, double>> pairs) {
  if (pairs.empty()) fail(Errc::domain, "fit_g needs at least one pair");
  std::vector<double> logs;
  logs.reserve(pairs.size());
  for (const auto& [lhs, rhs] : pairs) {
    if (!(lhs > 0) || !(rhs > 0))
      fail(Errc::domain, "fit_g requires strictly positive pairs");
    logs.push_back(std::log2(lhs) - std::log2(rhs));
  }
  double mean = 0;
  for (double v : logs) mean += v;
  mean /= static_cast<double>(logs.size());

  static const double kLn2 = std::log(2.0);
  double var = 0;
  for (double v : logs) var += (v - mean) * (v - mean);
  var /= static_cast<double>(logs.size());

  GFit fit;
  fit.log2_g = mean;
  fit.g = std::exp2(mean);
  fit.residual_gsd = std::exp(std::sqrt(var) * kLn2);
  return fit;
}

GFit fit_g(const RunSet& rs, const RunSet& rs_phi, const Bits& phi,
           const SubstrateSet& a_set, std::size_t n_max) {
  Dyadic m_phi = M_hat(rs, phi).value;
  if (m_phi.is_zero())
    fail(Errc::infeasible,
         "M(phi) is zero at these caps; use a ratio formula where g M(phi) "
         "cancels");
  double m_phi_d = m_phi.to_double();

  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(a_set.members.size());
  for (const auto& a : a_set.members) {
    double lhs = p_sigma_N(rs, a, n_max).value.to_double();
    double cond = m_cond_hat(rs_phi, a.bits).value.to_double();
    if (!(lhs > 0))
      fail(Errc::zero_evidence,
           "P(sigma_N = \"" + a.bits + "\") is zero at these caps");
    if (!(cond > 0))
      fail(Errc::zero_evidence,
           "m(\"" + a.bits + "\"|phi) is zero at these caps");
    pairs.emplace_back(lhs, m_phi_d * cond);
  }
  return fit_g_values(pairs);
}

TriangleReport triangle_check(RunSetProvider& provider, const Bits& phi,
                              const SubstrateSet& r, const SubstrateSet& s,
                              double g, std::size_t n_max) {
  const RunSet& rs = provider.get("");
  const RunSet& rs_phi = provider.get(phi);

  TriangleReport rep;
  rep.g = g;
  rep.sdf_r = sdf(rs_phi, r);
  rep.sdf_s = sdf(rs_phi, s);

  double sum = 0;
  std::size_t used = 0;
  for (const auto& a : r.members) {
    for (const auto& b : s.members) {
      ++rep.pairs_total;
      try {
        sum += weight_definitional(rs, b, a, n_max).value;  // w(a|b)
        ++used;
      } catch (const Error& e) {
        if (e.code() != Errc::zero_evidence) throw;
        ++rep.pairs_excluded;
      }
    }
  }
  if (used == 0) fail(Errc::degenerate, "every (a, b) pair had zero evidence");
  rep.lhs = sum / static_cast<double>(used);

  if (rep.sdf_r.value <= 0)
    fail(Errc::zero_denominator, "sdf(R) is zero for \"" + r.label + "\"");
  rep.bound_ratio = rep.lhs * rep.sdf_s.value / rep.sdf_r.value;
  rep.within_g = rep.bound_ratio < g;
  return rep;
}

}  // namespace uaec
