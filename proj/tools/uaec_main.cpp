// uaec: enumerate a tiny universal machine and compute algorithmic-prior
// quantities, mind-state weights and the decision-formula experiments on
// top of the enumeration.
//
// Exit codes: 0 success, 1 usage/config error, 2 degenerate result,
// 3 I/O or cache mismatch.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uaec/config.hpp"
#include "uaec/errors.hpp"
#include "uaec/report.hpp"
#include "uaec/version.hpp"

namespace {

using namespace uaec;

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::zero_evidence:
    case Errc::zero_denominator:
    case Errc::unsupported_subject:
    case Errc::zero_weight:
    case Errc::infeasible:
    case Errc::degenerate:
      return 2;
    case Errc::io:
    case Errc::cache_version:
    case Errc::cache_corrupt:
    case Errc::resource_budget:
      return 3;
    case Errc::domain:
    case Errc::width_mismatch:
    case Errc::config:
      return 1;
  }
  return 1;
}

struct GlobalFlags {
  std::string cache_dir;
  int threads = 1;
  std::string format = "json";
};

void emit(const Json& report, const GlobalFlags& g) {
  if (g.format == "csv")
    std::cout << report_to_csv(report);
  else
    std::cout << report_to_string(report);
}

Json prior_json(const PriorEstimate& est, const char* kind) {
  Json j;
  j["kind"] = kind;
  j["subject"] = est.subject;
  auto [num, den] = est.value.num_den();
  j["num"] = num;
  j["den"] = den;
  if (est.value.is_zero())
    j["log2"] = nullptr;
  else
    j["log2"] = std::log2(est.value.to_double());
  j["depth_cap"] = est.caps.depth_cap;
  j["step_cap"] = est.caps.step_cap;
  return j;
}

int cmd_enumerate(const GlobalFlags& g, std::uint32_t depth, std::uint32_t steps,
                  const std::string& aux, std::string out_path) {
  MachineConfig config{steps, depth, aux};
  config.validate();
  ExploreOptions opts;
  opts.threads = g.threads;
  RunSet rs = explore(config, opts);

  if (out_path.empty()) {
    if (g.cache_dir.empty())
      fail(Errc::config, "either --out or --cache-dir is required");
    std::filesystem::create_directories(g.cache_dir);
    out_path = (std::filesystem::path(g.cache_dir) / cache_file_name(config)).string();
  }
  save_runset(rs, out_path);

  Json j;
  j["command"] = "enumerate";
  j["tool_version"] = kToolVersion;
  j["machine_version"] = kMachineVersion;
  j["depth_cap"] = depth;
  j["step_cap"] = steps;
  j["aux_bits"] = aux.size();
  j["records"] = rs.records.size();
  j["out"] = out_path;
  emit(j, g);
  return 0;
}

int cmd_prior(const GlobalFlags& g, const std::string& kind, const Bits& x,
              std::uint64_t n, const std::string& cache_path) {
  RunSet rs = load_runset(cache_path);
  Json j;
  if (kind == "m") {
    if (!rs.config.aux_tape.empty())
      fail(Errc::config, "prior m needs an unconditional cache (empty aux)");
    j = prior_json(m_hat(rs, x), "m");
  } else if (kind == "M") {
    if (!rs.config.aux_tape.empty())
      fail(Errc::config, "prior M needs an unconditional cache (empty aux)");
    j = prior_json(M_hat(rs, x), "M");
  } else if (kind == "cond") {
    j = prior_json(m_cond_hat(rs, x), "cond");
    j["aux_bits"] = rs.config.aux_tape.size();
  } else if (kind == "nat") {
    j = prior_json(m_nat_hat(rs, n), "nat");
  } else {
    fail(Errc::config, "unknown prior kind \"" + kind + "\"");
  }
  emit(j, g);
  return 0;
}

int cmd_weight(const GlobalFlags& g, const Bits& a, const Bits& b,
               const std::string& cache_path, const std::string& cond_cache,
               std::size_t n_max) {
  RunSet rs = load_runset(cache_path);
  if (!rs.config.aux_tape.empty())
    fail(Errc::config, "weight needs an unconditional cache (empty aux)");
  MindState sa{a}, sb{b};

  Json j;
  j["command"] = "weight";
  j["a"] = a;
  j["b"] = b;
  j["n_max"] = n_max;
  j["depth_cap"] = rs.config.depth_cap;
  j["step_cap"] = rs.config.step_cap;

  WeightValue def = weight_definitional(rs, sa, sb, n_max);
  j["definitional"] = def.value;
  auto [nn, nd] = def.num.num_den();
  auto [en, ed] = def.den.num_den();
  j["definitional_exact"] = {{"num", {{"num", nn}, {"den", nd}}},
                             {"den", {{"num", en}, {"den", ed}}}};
  j["fast_ratio"] = weight_fast(rs, sa, sb);

  if (!cond_cache.empty()) {
    RunSet rs_a = load_runset(cond_cache);
    if (rs_a.config.aux_tape != a)
      fail(Errc::config, "--cond-cache was built with aux \"" +
                             rs_a.config.aux_tape + "\", expected \"" + a + "\"");
    j["conditional"] = weight_cond(rs_a, sb);
  } else {
    j["conditional"] = nullptr;
  }
  j["gamma_tail"] = gamma_mass(rs, n_max).tail_bound.to_double();
  emit(j, g);
  return 0;
}

int cmd_experiment(const GlobalFlags& g, const std::string& kind,
                   const std::string& config_path, bool build_cache) {
  ExperimentConfig cfg = load_experiment_config(config_path);
  ExploreOptions opts;
  opts.threads = g.threads;
  RunSetProvider provider(cfg.machine, opts, build_cache);
  if (!g.cache_dir.empty()) provider.set_cache_dir(g.cache_dir);
  Json report = run_experiment(kind, cfg, provider);
  emit(report, g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale algorithmic-prior laboratory"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--cache-dir", g.cache_dir, "RunSet cache directory")
      ->envname("UAEC_CACHE_DIR");
  app.add_option("--threads", g.threads, "worker threads for enumeration")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* enumerate_cmd = app.add_subcommand("enumerate", "explore and cache a RunSet");
  enumerate_cmd->fallthrough();
  std::uint32_t depth = 0, steps = 0;
  std::string aux, out_path;
  enumerate_cmd->add_option("--depth", depth, "depth cap (program bits)")->required();
  enumerate_cmd->add_option("--steps", steps, "step cap (opcode executions)")->required();
  enumerate_cmd->add_option("--aux", aux, "auxiliary tape bits");
  enumerate_cmd->add_option("--out", out_path, "output file (default: cache dir)");

  auto* prior_cmd = app.add_subcommand("prior", "query a prior estimate");
  prior_cmd->fallthrough();
  std::string prior_kind;
  Bits subject_x;
  std::uint64_t subject_n = 0;
  std::string cache_path;
  prior_cmd->add_option("kind", prior_kind, "m | M | cond | nat")->required();
  prior_cmd->add_option("--x", subject_x, "subject bit string");
  prior_cmd->add_option("--n", subject_n, "subject positive integer (nat)");
  prior_cmd->add_option("--cache", cache_path, "RunSet cache file")->required();

  auto* weight_cmd = app.add_subcommand("weight", "the three weight estimators");
  weight_cmd->fallthrough();
  Bits wa, wb;
  std::string w_cache, w_cond_cache;
  std::size_t w_n_max = 12;
  weight_cmd->add_option("--a", wa, "conditioning mind-state")->required();
  weight_cmd->add_option("--b", wb, "target mind-state")->required();
  weight_cmd->add_option("--cache", w_cache, "unconditional RunSet cache")->required();
  weight_cmd->add_option("--cond-cache", w_cond_cache, "cache built with aux = a");
  weight_cmd->add_option("--n-max", w_n_max, "discount truncation level");

  auto* exp_cmd = app.add_subcommand("experiment", "run a configured experiment");
  exp_cmd->fallthrough();
  std::string exp_kind, exp_config;
  bool build_cache = false;
  exp_cmd->add_option("kind", exp_kind,
                      "teleport | simulation | ethics | resolution | triangle | "
                      "gfit | pipeline")
      ->required();
  exp_cmd->add_option("--config", exp_config, "experiment config (JSON)")->required();
  exp_cmd->add_flag("--build-cache", build_cache, "explore missing RunSets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (enumerate_cmd->parsed())
      return cmd_enumerate(g, depth, steps, aux, out_path);
    if (prior_cmd->parsed())
      return cmd_prior(g, prior_kind, subject_x, subject_n, cache_path);
    if (weight_cmd->parsed())
      return cmd_weight(g, wa, wb, w_cache, w_cond_cache, w_n_max);
    if (exp_cmd->parsed())
      return cmd_experiment(g, exp_kind, exp_config, build_cache);
  } catch (const uaec::Error& e) {
    std::cerr << "uaec: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "uaec: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
