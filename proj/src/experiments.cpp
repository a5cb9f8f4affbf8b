#include "uaec/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "uaec/errors.hpp"

namespace uaec {

void UtilitySpec::validate() const {
  for (const auto& [bits, u] : table) {
    require_bits(bits, "utility table key");
    if (!(u >= -1.0 && u <= 1.0))
      fail(Errc::config, "utility of \"" + bits + "\" outside [-1, 1]");
  }
}

double UtilitySpec::value(const MindState& b) const {
  switch (kind) {
    case Kind::constant_one:
      return 1.0;
    case Kind::popcount_fraction: {
      if (b.width() == 0) fail(Errc::domain, "empty mind-state");
      auto ones = static_cast<double>(
          std::count(b.bits.begin(), b.bits.end(), '1'));
      return ones / static_cast<double>(b.width());
    }
    case Kind::lookup_table: {
      auto it = table.find(b.bits);
      if (it == table.end())
        fail(Errc::domain, "utility table has no entry for \"" + b.bits + "\"");
      return it->second;
    }
  }
  fail(Errc::domain, "unknown utility kind");
}

double v_hat(const RunSet& rs, const MindState& a, const UtilitySpec& u,
             std::size_t n_max) {
  u.validate();
  Posterior post = posterior_runs(rs, a, n_max);

  // The b-universe is restricted to blocks occurring in posterior runs.
  std::set<Bits> occurring;
  for (const auto& pr : post.runs) {
    const auto& rec = rs.records[pr.record_index];
    std::size_t count = std::min(n_max, rec.output.size() / a.width());
    for (std::size_t j = 1; j <= count; ++j)
      occurring.insert(rec.output.substr((j - 1) * a.width(), a.width()));
  }

  double total = 0;
  for (const auto& bits : occurring) {
    MindState b{bits};
    total += weight_definitional(rs, a, b, n_max).value * u.value(b);
  }
  return total;
}

double v_hat_direct(const RunSet& rs, const MindState& a, const UtilitySpec& u,
                    std::size_t n_max) {
  u.validate();
  auto gammas = gamma_table(rs, n_max);
  std::vector<double> gamma_d(n_max + 1, 0.0);
  for (std::size_t n = 1; n <= n_max; ++n) gamma_d[n] = gammas[n].to_double();

  Posterior post = posterior_runs(rs, a, n_max);
  double total = 0;
  for (const auto& pr : post.runs) {
    const auto& rec = rs.records[pr.record_index];
    std::size_t count = std::min(n_max, rec.output.size() / a.width());
    double stream = 0;
    for (std::size_t j = 1; j <= count; ++j)
      stream += gamma_d[j] *
                u.value(MindState{rec.output.substr((j - 1) * a.width(),
                                                    a.width())});
    total += pr.weight * stream;
  }
  return total;
}

void Scenario::validate() const {
  if (pairs.empty()) fail(Errc::config, "scenario \"" + label + "\" is empty");
  double sum = 0;
  for (const auto& p : pairs) {
    require_bits(p.a.bits, "scenario state");
    require_bits(p.b.bits, "scenario state");
    if (p.a.width() != p.b.width())
      fail(Errc::width_mismatch, "scenario \"" + label + "\" mixes widths");
    if (!(p.probability >= 0))
      fail(Errc::config, "scenario \"" + label + "\" has a negative probability");
    sum += p.probability;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    fail(Errc::config, "scenario \"" + label + "\" probabilities sum to " +
                           std::to_string(sum) + ", expected 1");
}

const char* TeleportReport::interpretation() {
  return "ratio near 1: the transfer preserves what matters and is an "
         "acceptable way to travel; ratio near 0: the transfer severs the "
         "weight relation and ought to be avoided";
}

namespace {

// Expected weight over a scenario; excluded pairs keep their diagnostics.
double scenario_expectation(const RunSet& rs, const Scenario& scenario,
                            std::size_t n_max,
                            std::vector<TeleportPairDiag>& diags,
                            std::size_t& excluded) {
  double expectation = 0;
  for (const auto& p : scenario.pairs) {
    TeleportPairDiag d{p.a.bits, p.b.bits, p.probability, 0, false};
    try {
      d.weight = weight_definitional(rs, p.a, p.b, n_max).value;
      expectation += p.probability * d.weight;
    } catch (const Error& e) {
      if (e.code() != Errc::zero_evidence) throw;
      d.excluded = true;
      ++excluded;
    }
    diags.push_back(std::move(d));
  }
  return expectation;
}

}  // namespace

TeleportReport teleport_ratio(const RunSet& rs, const Scenario& tele,
                              const Scenario& stay, std::size_t n_max) {
  tele.validate();
  stay.validate();
  TeleportReport rep;
  rep.gamma_tail = gamma_mass(rs, n_max).tail_bound;
  rep.e_tele = scenario_expectation(rs, tele, n_max, rep.tele_pairs, rep.excluded);
  rep.e_stay = scenario_expectation(rs, stay, n_max, rep.stay_pairs, rep.excluded);
  if (!(rep.e_stay > 0))
    fail(Errc::zero_denominator,
         "stay expectation is zero; the ratio is undefined");
  rep.ratio = rep.e_tele / rep.e_stay;
  return rep;
}

AzReport a_z(const RunSet& rs, const std::vector<AgentTimeline>& timelines,
             std::size_t n_max) {
  if (timelines.size() < 2) fail(Errc::domain, "a_z needs at least 2 timelines");
  for (const auto& tl : timelines)
    if (tl.states.empty())
      fail(Errc::domain, "timeline \"" + tl.agent_id + "\" is empty");

  AzReport rep;
  rep.gamma_tail = gamma_mass(rs, n_max).tail_bound;
  double log_product = 0;

  for (std::size_t ai = 0; ai < timelines.size(); ++ai) {
    const auto& alpha = timelines[ai];
    for (std::size_t t = 1; t <= alpha.states.size(); ++t) {
      AzTerm term;
      term.agent_id = alpha.agent_id;
      term.t = t;
      const MindState& here = alpha.states[t - 1];

      double num_sum = 0, den_sum = 0;
      std::size_t num_n = 0, den_n = 0;
      bool evidence = true;
      try {
        // Own future: delta > 0 within this agent's timeline.
        for (std::size_t d = t + 1; d <= alpha.states.size(); ++d) {
          den_sum += weight_definitional(rs, here, alpha.states[d - 1], n_max).value;
          ++den_n;
        }
        // Other agents' strictly later states.
        for (std::size_t bi = 0; bi < timelines.size(); ++bi) {
          if (bi == ai) continue;
          const auto& beta = timelines[bi];
          for (std::size_t d = t + 1; d <= beta.states.size(); ++d) {
            num_sum += weight_definitional(rs, here, beta.states[d - 1], n_max).value;
            ++num_n;
          }
        }
      } catch (const Error& e) {
        if (e.code() != Errc::zero_evidence) throw;
        evidence = false;
      }

      if (!evidence) {
        term.skip_reason = "zero evidence for the conditioning state";
        ++rep.weights_excluded;
      } else if (num_n == 0 || den_n == 0) {
        term.skip_reason = "no later state to compare against";
      } else if (den_sum <= 0) {
        term.skip_reason = "own-future mean weight is zero";
      } else {
        term.defined = true;
        term.num = num_sum / static_cast<double>(num_n);
        term.den = den_sum / static_cast<double>(den_n);
      }

      if (term.defined) {
        ++rep.terms_defined;
        log_product += std::log(term.num) - std::log(term.den);  // may be -inf
      } else {
        ++rep.terms_excluded;
      }
      rep.per_term.push_back(std::move(term));
    }
  }

  if (rep.terms_defined == 0)
    fail(Errc::degenerate, "no (agent, T) term was defined");
  rep.product_form = std::exp(log_product);
  rep.geomean_form =
      std::exp(log_product / static_cast<double>(rep.terms_defined));
  return rep;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::egoism_leaning: return "egoism-leaning";
    case Verdict::indeterminate: return "indeterminate";
    case Verdict::utilitarian_leaning: return "utilitarian-leaning";
  }
  return "?";
}

Verdict ethics_verdict(const AzReport& report, double low, double high) {
  if (!(low >= 0) || !(low < high))
    fail(Errc::domain, "thresholds must satisfy 0 <= low < high");
  if (report.geomean_form < low) return Verdict::egoism_leaning;
  if (report.geomean_form > high) return Verdict::utilitarian_leaning;
  return Verdict::indeterminate;
}

MindState coarsen(const MindState& x, CoarsenOp op) {
  if (x.width() % 2 != 0)
    fail(Errc::domain, "coarsening needs an even width, got " +
                           std::to_string(x.width()));
  Bits out;
  out.reserve(x.width() / 2);
  switch (op) {
    case CoarsenOp::even_subsample:
      for (std::size_t i = 0; i < x.width(); i += 2) out.push_back(x.bits[i]);
      break;
    case CoarsenOp::pairwise_xor:
      for (std::size_t i = 0; i < x.width(); i += 2)
        out.push_back(x.bits[i] != x.bits[i + 1] ? '1' : '0');
      break;
  }
  return MindState{out};
}

ResolutionReport resolution_check(const RunSet& rs, const MindState& a,
                                  const MindState& b, const MindState& c,
                                  CoarsenOp op, std::size_t n_max) {
  ResolutionReport rep;
  rep.op = op;

  auto weight_or_fail = [&](const MindState& cond, const MindState& target,
                            const char* name) {
    double w;
    try {
      w = weight_definitional(rs, cond, target, n_max).value;
    } catch (const Error& e) {
      if (e.code() != Errc::zero_evidence) throw;
      fail(Errc::zero_weight, std::string(name) + " undefined: zero evidence for \"" +
                                  cond.bits + "\"");
    }
    if (!(w > 0))
      fail(Errc::zero_weight, std::string(name) + " is zero at these caps");
    return w;
  };

  double w_ca = weight_or_fail(a, c, "w(c|a)");
  double w_ba = weight_or_fail(a, b, "w(b|a)");
  MindState a2 = coarsen(a, op), b2 = coarsen(b, op), c2 = coarsen(c, op);
  double w_ca2 = weight_or_fail(a2, c2, "w(c'|a')");
  double w_ba2 = weight_or_fail(a2, b2, "w(b'|a')");

  rep.hi_ratio = w_ca / w_ba;
  rep.lo_ratio = w_ca2 / w_ba2;
  rep.log2_deviation = std::abs(std::log2(rep.hi_ratio) - std::log2(rep.lo_ratio));
  return rep;
}

}  // namespace uaec
