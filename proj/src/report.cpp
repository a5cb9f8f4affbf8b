#include "uaec/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "uaec/errors.hpp"
#include "uaec/hash.hpp"
#include "uaec/version.hpp"

namespace uaec {

namespace {

Json fraction_json(const Dyadic& d) {
  auto [num, den] = d.num_den();
  Json j;
  j["num"] = num;
  j["den"] = den;
  j["value"] = d.to_double();
  return j;
}

Json sdf_json(const SdfValue& v) {
  Json j;
  j["value"] = v.value;
  j["all_zero"] = v.all_zero;
  return j;
}

Json envelope(const std::string& kind, const ExperimentConfig& cfg) {
  Json j;
  j["experiment"] = kind;
  j["tool_version"] = kToolVersion;
  j["machine_version"] = kMachineVersion;
  j["caps"] = {{"depth_cap", cfg.machine.depth_cap},
               {"step_cap", cfg.machine.step_cap}};
  j["inputs_digest"] = sha256_hex(cfg.raw_bytes);
  return j;
}

Json pair_diags_json(const std::vector<TeleportPairDiag>& diags) {
  Json arr = Json::array();
  for (const auto& d : diags) {
    Json e;
    e["a"] = d.a;
    e["b"] = d.b;
    e["p"] = d.probability;
    if (d.excluded)
      e["weight"] = nullptr;
    else
      e["weight"] = d.weight;
    arr.push_back(std::move(e));
  }
  return arr;
}

Json simulation_values(const ExperimentConfig& cfg, RunSetProvider& provider) {
  if (!cfg.cosmos) fail(Errc::config, "cosmos: required for a simulation run");
  const RunSet& rs_phi = provider.get(cfg.cosmos->phi);
  const auto& s = cfg.substrate(cfg.sim_s);
  const auto& r = cfg.substrate(cfg.sim_r);
  SimulationResult res = simulation_ratio(rs_phi, s, r);
  Json v;
  v["sdf_S"] = sdf_json(res.sdf_s);
  v["sdf_R"] = sdf_json(res.sdf_r);
  v["size_S"] = s.members.size();
  v["size_R"] = r.members.size();
  v["ratio"] = res.ratio;
  v["p_sim"] = res.p_sim;
  return v;
}

Json teleport_values(const ExperimentConfig& cfg, RunSetProvider& provider) {
  const RunSet& rs = provider.get("");
  TeleportReport rep = teleport_ratio(rs, cfg.scenario(cfg.tele_name),
                                      cfg.scenario(cfg.stay_name), cfg.n_max);
  Json v;
  v["ratio"] = rep.ratio;
  v["e_tele"] = rep.e_tele;
  v["e_stay"] = rep.e_stay;
  v["interpretation"] = TeleportReport::interpretation();
  v["pairs_tele"] = pair_diags_json(rep.tele_pairs);
  v["pairs_stay"] = pair_diags_json(rep.stay_pairs);
  v["pairs_excluded"] = rep.excluded;
  v["n_max"] = cfg.n_max;
  v["gamma_tail"] = rep.gamma_tail.to_double();
  return v;
}

Json ethics_values(const ExperimentConfig& cfg, RunSetProvider& provider) {
  if (cfg.timelines.size() < 2)
    fail(Errc::config, "timelines: ethics needs at least two agents");
  const RunSet& rs = provider.get("");
  AzReport rep = a_z(rs, cfg.timelines, cfg.n_max);
  Verdict verdict = ethics_verdict(rep, cfg.threshold_low, cfg.threshold_high);
  Json v;
  v["product_form"] = rep.product_form;
  v["geomean_form"] = rep.geomean_form;
  v["verdict"] = verdict_name(verdict);
  v["thresholds"] = {{"low", cfg.threshold_low}, {"high", cfg.threshold_high}};
  Json terms = Json::array();
  for (const auto& t : rep.per_term) {
    Json e;
    e["agent"] = t.agent_id;
    e["t"] = t.t;
    if (t.defined) {
      e["num"] = t.num;
      e["den"] = t.den;
    } else {
      e["skipped"] = t.skip_reason;
    }
    terms.push_back(std::move(e));
  }
  v["per_term"] = std::move(terms);
  v["terms_defined"] = rep.terms_defined;
  v["terms_excluded"] = rep.terms_excluded;
  v["n_max"] = cfg.n_max;
  v["gamma_tail"] = rep.gamma_tail.to_double();
  return v;
}

Json resolution_values(const ExperimentConfig& cfg, RunSetProvider& provider) {
  if (!cfg.resolution) fail(Errc::config, "resolution: section required");
  const RunSet& rs = provider.get("");
  ResolutionReport rep =
      resolution_check(rs, cfg.resolution->a, cfg.resolution->b,
                       cfg.resolution->c, cfg.coarsen_op, cfg.n_max);
  Json v;
  v["hi_ratio"] = rep.hi_ratio;
  v["lo_ratio"] = rep.lo_ratio;
  v["log2_deviation"] = rep.log2_deviation;
  v["coarsen"] = cfg.coarsen_op == CoarsenOp::even_subsample ? "even_subsample"
                                                             : "pairwise_xor";
  v["hi_width"] = cfg.block_width;
  v["lo_width"] = cfg.block_width / 2;
  return v;
}

Json triangle_values(const ExperimentConfig& cfg, RunSetProvider& provider) {
  if (!cfg.cosmos) fail(Errc::config, "cosmos: required for a triangle run");
  TriangleReport rep =
      triangle_check(provider, cfg.cosmos->phi, cfg.substrate(cfg.tri_r),
                     cfg.substrate(cfg.tri_s), cfg.g, cfg.n_max);
  Json v;
  v["lhs"] = rep.lhs;
  v["bound_ratio"] = rep.bound_ratio;
  v["g"] = rep.g;
  v["within_g"] = rep.within_g;
  v["pairs_total"] = rep.pairs_total;
  v["pairs_excluded"] = rep.pairs_excluded;
  v["sdf_R"] = sdf_json(rep.sdf_r);
  v["sdf_S"] = sdf_json(rep.sdf_s);
  v["n_max"] = cfg.n_max;
  return v;
}

Json gfit_values(const ExperimentConfig& cfg, RunSetProvider& provider) {
  if (!cfg.cosmos) fail(Errc::config, "cosmos: required for a g fit");
  const RunSet& rs = provider.get("");
  const RunSet& rs_phi = provider.get(cfg.cosmos->phi);
  GFit fit = fit_g(rs, rs_phi, cfg.cosmos->phi, cfg.substrate(cfg.gfit_set),
                   cfg.n_max);
  Json v;
  v["g"] = fit.g;
  v["log2_g"] = fit.log2_g;
  v["residual_gsd"] = fit.residual_gsd;
  v["substrate"] = cfg.gfit_set;
  v["n_max"] = cfg.n_max;
  return v;
}

Json nid_values(const ExperimentConfig& cfg, RunSetProvider& provider) {
  const auto& base = cfg.substrate(cfg.nid_over);
  Json labels = Json::array();
  for (const auto& m : base.members) labels.push_back(m.bits);

  std::size_t excluded = 0;
  Json matrix = Json::array();
  for (const auto& a : base.members) {
    Json row = Json::array();
    for (const auto& b : base.members) {
      try {
        row.push_back(nid(provider, a, b));
      } catch (const Error& e) {
        if (e.code() != Errc::unsupported_subject) throw;
        row.push_back(nullptr);
        ++excluded;
      }
    }
    matrix.push_back(std::move(row));
  }

  Json v;
  v["over"] = cfg.nid_over;
  v["labels"] = std::move(labels);
  v["matrix"] = std::move(matrix);
  v["entries_excluded"] = excluded;
  return v;
}

// Rank agreement between the three weight estimators across the pairs of
// a substrate, where all three are defined.
Json estimator_agreement(const ExperimentConfig& cfg, RunSetProvider& provider,
                         const SubstrateSet& base) {
  std::vector<double> def, fast, cond;
  std::size_t skipped = 0;
  for (const auto& a : base.members) {
    for (const auto& b : base.members) {
      try {
        WeightReport rep = weight_report(provider, a, b, cfg.n_max);
        def.push_back(rep.definitional);
        fast.push_back(rep.fast_ratio);
        cond.push_back(rep.conditional);
      } catch (const Error& e) {
        if (e.code() != Errc::zero_evidence &&
            e.code() != Errc::zero_denominator)
          throw;
        ++skipped;
      }
    }
  }
  Json v;
  v["pairs_used"] = def.size();
  v["pairs_skipped"] = skipped;
  if (def.size() >= 2) {
    v["spearman_def_fast"] = spearman(def, fast);
    v["spearman_def_cond"] = spearman(def, cond);
  } else {
    v["spearman_def_fast"] = nullptr;
    v["spearman_def_cond"] = nullptr;
  }
  return v;
}

}  // namespace

Json run_experiment(const std::string& kind, const ExperimentConfig& cfg,
                    RunSetProvider& provider) {
  Json report = envelope(kind, cfg);
  Json values;
  Json diagnostics;

  if (kind == "simulation") {
    values = simulation_values(cfg, provider);
  } else if (kind == "teleport") {
    values = teleport_values(cfg, provider);
  } else if (kind == "ethics") {
    values = ethics_values(cfg, provider);
  } else if (kind == "resolution") {
    values = resolution_values(cfg, provider);
  } else if (kind == "triangle") {
    values = triangle_values(cfg, provider);
  } else if (kind == "gfit") {
    values = gfit_values(cfg, provider);
  } else if (kind == "pipeline") {
    if (cfg.cosmos) {
      Json c;
      c["rule"] = cfg.cosmos->rule;
      c["seed_row"] = cfg.cosmos->seed_row;
      c["steps"] = cfg.cosmos->steps;
      c["phi_bits"] = cfg.cosmos->phi.size();
      values["cosmos"] = std::move(c);
    }
    values["simulation"] = simulation_values(cfg, provider);
    values["teleport"] = teleport_values(cfg, provider);
    values["ethics"] = ethics_values(cfg, provider);
    values["triangle"] = triangle_values(cfg, provider);
    values["nid"] = nid_values(cfg, provider);
    diagnostics["estimators"] =
        estimator_agreement(cfg, provider, cfg.substrate(cfg.nid_over));
  } else {
    fail(Errc::config, "unknown experiment kind \"" + kind + "\"");
  }

  report["values"] = std::move(values);
  diagnostics["block_width"] = cfg.block_width;
  diagnostics["records"] = provider.get("").records.size();
  diagnostics["tiling_mass"] = fraction_json(tiling_mass(provider.get("")));
  report["diagnostics"] = std::move(diagnostics);
  return report;
}

std::string report_to_string(const Json& report) {
  return report.dump(2) + "\n";
}

namespace {

void csv_escape(std::ostringstream& out, const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

std::string scalar_to_string(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

void flatten(const Json& j, const std::string& path, std::ostringstream& out,
             std::vector<std::pair<std::string, const Json*>>& tables) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out,
              tables);
  } else if (j.is_array()) {
    bool table = !j.empty() && j.front().is_object();
    if (table) {
      tables.emplace_back(path, &j);
    } else {
      out << path << ',';
      csv_escape(out, j.dump());
      out << '\n';
    }
  } else {
    out << path << ',';
    csv_escape(out, scalar_to_string(j));
    out << '\n';
  }
}

}  // namespace

std::string report_to_csv(const Json& report) {
  std::ostringstream out;
  std::vector<std::pair<std::string, const Json*>> tables;
  out << "key,value\n";
  flatten(report, "", out, tables);
  for (const auto& [path, arr] : tables) {
    out << "\n# " << path << '\n';
    std::vector<std::string> cols;
    for (const auto& row : *arr)
      for (auto it = row.begin(); it != row.end(); ++it)
        if (std::find(cols.begin(), cols.end(), it.key()) == cols.end())
          cols.push_back(it.key());
    for (std::size_t i = 0; i < cols.size(); ++i)
      out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& row : *arr) {
      for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out << ',';
        auto it = row.find(cols[i]);
        if (it != row.end()) csv_escape(out, scalar_to_string(*it));
      }
      out << '\n';
    }
  }
  return out.str();
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    return std::numeric_limits<double>::quiet_NaN();
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  std::vector<double> rx = ranks(xs), ry = ranks(ys);
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= static_cast<double>(rx.size());
  my /= static_cast<double>(ry.size());
  double cov = 0, vx = 0, vy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    cov += (rx[i] - mx) * (ry[i] - my);
    vx += (rx[i] - mx) * (rx[i] - mx);
    vy += (ry[i] - my) * (ry[i] - my);
  }
  if (vx == 0 || vy == 0) return std::numeric_limits<double>::quiet_NaN();
  return cov / std::sqrt(vx * vy);
}

}  // namespace uaec
