#include "uaec/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "uaec/errors.hpp"

namespace uaec {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& why) {
  fail(Errc::config, path + ": " + why);
}

const json& member(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path + "." + key, "missing");
  return *it;
}

const json* member_opt(const json& j, const char* key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

std::uint64_t get_uint(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) bad(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

Bits get_bits(const json& j, const std::string& path) {
  std::string s = get_string(j, path);
  if (!valid_bits(s)) bad(path, "expected a '0'/'1' string");
  return s;
}

MindState get_state(const json& j, const std::string& path, std::size_t width) {
  Bits b = get_bits(j, path);
  if (b.size() != width)
    bad(path, "state \"" + b + "\" has width " + std::to_string(b.size()) +
                  ", experiment block_width is " + std::to_string(width));
  return MindState{b};
}

SubstrateSet parse_substrate(const json& j, const std::string& name,
                             const std::string& path,
                             const std::optional<Cosmos>& cosmos,
                             const std::map<std::string, SubstrateSet>& done,
                             std::size_t width) {
  if (const json* states = member_opt(j, "states")) {
    if (!states->is_array() || states->empty())
      bad(path + ".states", "expected a non-empty array");
    SubstrateSet out;
    out.label = name;
    for (std::size_t i = 0; i < states->size(); ++i)
      out.members.push_back(
          get_state((*states)[i], path + ".states[" + std::to_string(i) + "]", width));
    return out;
  }
  if (const json* win = member_opt(j, "windows")) {
    if (!cosmos)
      bad(path + ".windows", "requires a cosmos section");
    std::size_t w = width;
    if (const json* wj = member_opt(*win, "width"))
      w = static_cast<std::size_t>(get_uint(*wj, path + ".windows.width"));
    if (w != width)
      bad(path + ".windows.width", "must equal block_width");
    std::size_t limit = 0;
    if (const json* lj = member_opt(*win, "limit"))
      limit = static_cast<std::size_t>(get_uint(*lj, path + ".windows.limit"));
    return windows_of(*cosmos, w, name, limit);
  }
  if (const json* tr = member_opt(j, "transform")) {
    std::string of = get_string(member(*tr, path + ".transform", "of"),
                                path + ".transform.of");
    auto it = done.find(of);
    if (it == done.end())
      bad(path + ".transform.of",
          "substrate \"" + of + "\" is not a directly defined substrate");
    std::string op = get_string(member(*tr, path + ".transform", "op"),
                                path + ".transform.op");
    if (op != "bit_double")
      bad(path + ".transform.op", "unknown transform \"" + op + "\"");
    return bit_double(it->second, name);
  }
  bad(path, "expected one of: states, windows, transform");
}

Scenario parse_scenario(const json& j, const std::string& name,
                        const std::string& path, std::size_t width) {
  Scenario sc;
  sc.label = name;
  const json& pairs = member(j, path, "pairs");
  if (!pairs.is_array() || pairs.empty())
    bad(path + ".pairs", "expected a non-empty array");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::string p = path + ".pairs[" + std::to_string(i) + "]";
    const json& e = pairs[i];
    ScenarioPair pair;
    pair.a = get_state(member(e, p, "a"), p + ".a", width);
    pair.b = get_state(member(e, p, "b"), p + ".b", width);
    pair.probability = get_number(member(e, p, "p"), p + ".p");
    sc.pairs.push_back(std::move(pair));
  }
  try {
    sc.validate();
  } catch (const Error& e) {
    bad(path, e.what());
  }
  return sc;
}

}  // namespace

const SubstrateSet& ExperimentConfig::substrate(const std::string& name) const {
  auto it = substrates.find(name);
  if (it == substrates.end())
    fail(Errc::config, "substrates." + name + ": not defined");
  return it->second;
}

const Scenario& ExperimentConfig::scenario(const std::string& name) const {
  auto it = scenarios.find(name);
  if (it == scenarios.end())
    fail(Errc::config, "scenarios." + name + ": not defined");
  return it->second;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::config, std::string("JSON parse failure: ") + e.what());
  }
  if (!root.is_object()) fail(Errc::config, "top level must be an object");

  ExperimentConfig cfg;
  cfg.raw_bytes = text;

  const json& machine = member(root, "", "machine");
  cfg.machine.depth_cap = static_cast<std::uint32_t>(
      get_uint(member(machine, "machine", "depth_cap"), "machine.depth_cap"));
  cfg.machine.step_cap = static_cast<std::uint32_t>(
      get_uint(member(machine, "machine", "step_cap"), "machine.step_cap"));
  try {
    cfg.machine.validate();
  } catch (const Error& e) {
    bad("machine", e.what());
  }

  if (const json* cj = member_opt(root, "cosmos")) {
    int rule = static_cast<int>(get_uint(member(*cj, "cosmos", "rule"), "cosmos.rule"));
    Bits seed = get_bits(member(*cj, "cosmos", "seed_row"), "cosmos.seed_row");
    auto steps = static_cast<std::uint32_t>(
        get_uint(member(*cj, "cosmos", "steps"), "cosmos.steps"));
    try {
      cfg.cosmos = gen_phi(rule, seed, steps);
    } catch (const Error& e) {
      bad("cosmos", e.what());
    }
  }

  cfg.block_width = static_cast<std::size_t>(
      get_uint(member(root, "", "block_width"), "block_width"));
  if (cfg.block_width == 0) bad("block_width", "must be >= 1");

  if (const json* nj = member_opt(root, "n_max")) {
    cfg.n_max = static_cast<std::size_t>(get_uint(*nj, "n_max"));
    if (cfg.n_max == 0) bad("n_max", "must be >= 1");
  }

  if (const json* subs = member_opt(root, "substrates")) {
    if (!subs->is_object()) bad("substrates", "expected an object");
    // Two passes: direct definitions first, then transforms, which may
    // reference any directly defined substrate.
    for (auto it = subs->begin(); it != subs->end(); ++it) {
      if (member_opt(it.value(), "transform")) continue;
      cfg.substrates.emplace(
          it.key(), parse_substrate(it.value(), it.key(),
                                    "substrates." + it.key(), cfg.cosmos,
                                    cfg.substrates, cfg.block_width));
    }
    for (auto it = subs->begin(); it != subs->end(); ++it) {
      if (!member_opt(it.value(), "transform")) continue;
      cfg.substrates.emplace(
          it.key(), parse_substrate(it.value(), it.key(),
                                    "substrates." + it.key(), cfg.cosmos,
                                    cfg.substrates, cfg.block_width));
    }
  }

  if (const json* scen = member_opt(root, "scenarios")) {
    if (!scen->is_object()) bad("scenarios", "expected an object");
    for (auto it = scen->begin(); it != scen->end(); ++it)
      cfg.scenarios.emplace(it.key(),
                            parse_scenario(it.value(), it.key(),
                                           "scenarios." + it.key(),
                                           cfg.block_width));
  }

  if (const json* tls = member_opt(root, "timelines")) {
    if (!tls->is_array()) bad("timelines", "expected an array");
    std::set<Bits> all_states;
    for (std::size_t i = 0; i < tls->size(); ++i) {
      std::string p = "timelines[" + std::to_string(i) + "]";
      const json& e = (*tls)[i];
      AgentTimeline tl;
      tl.agent_id = get_string(member(e, p, "agent"), p + ".agent");
      const json& states = member(e, p, "states");
      if (!states.is_array() || states.empty())
        bad(p + ".states", "expected a non-empty array");
      std::set<Bits> own;
      for (std::size_t k = 0; k < states.size(); ++k) {
        MindState st = get_state(states[k], p + ".states[" + std::to_string(k) + "]",
                                 cfg.block_width);
        own.insert(st.bits);
        tl.states.push_back(std::move(st));
      }
      // Disjointness across agents is a config-level contract; the a_z
      // operation itself accepts mirrored timelines for identity tests.
      for (const Bits& b : own)
        if (!all_states.insert(b).second)
          bad(p + ".states", "state \"" + b + "\" already belongs to another agent");
      cfg.timelines.push_back(std::move(tl));
    }
  }

  if (const json* uj = member_opt(root, "utility")) {
    std::string kind = get_string(member(*uj, "utility", "kind"), "utility.kind");
    if (kind == "popcount_fraction") {
      cfg.utility.kind = UtilitySpec::Kind::popcount_fraction;
    } else if (kind == "constant_one") {
      cfg.utility.kind = UtilitySpec::Kind::constant_one;
    } else if (kind == "lookup_table") {
      cfg.utility.kind = UtilitySpec::Kind::lookup_table;
      const json& table = member(*uj, "utility", "table");
      if (!table.is_object()) bad("utility.table", "expected an object");
      for (auto it = table.begin(); it != table.end(); ++it) {
        if (!valid_bits(it.key()))
          bad("utility.table", "key \"" + it.key() + "\" is not a bit string");
        cfg.utility.table[it.key()] =
            get_number(it.value(), "utility.table." + it.key());
      }
      try {
        cfg.utility.validate();
      } catch (const Error& e) {
        bad("utility.table", e.what());
      }
    } else {
      bad("utility.kind", "unknown kind \"" + kind + "\"");
    }
  }

  if (const json* tj = member_opt(root, "thresholds")) {
    cfg.threshold_low = get_number(member(*tj, "thresholds", "low"), "thresholds.low");
    cfg.threshold_high =
        get_number(member(*tj, "thresholds", "high"), "thresholds.high");
    if (!(cfg.threshold_low >= 0) || !(cfg.threshold_low < cfg.threshold_high))
      bad("thresholds", "need 0 <= low < high");
  }

  if (const json* cj = member_opt(root, "coarsen")) {
    std::string op = get_string(*cj, "coarsen");
    if (op == "even_subsample")
      cfg.coarsen_op = CoarsenOp::even_subsample;
    else if (op == "pairwise_xor")
      cfg.coarsen_op = CoarsenOp::pairwise_xor;
    else
      bad("coarsen", "unknown operator \"" + op + "\"");
  }

  if (const json* rj = member_opt(root, "resolution")) {
    ExperimentConfig::ResolutionTriple triple;
    triple.a = get_state(member(*rj, "resolution", "a"), "resolution.a",
                         cfg.block_width);
    triple.b = get_state(member(*rj, "resolution", "b"), "resolution.b",
                         cfg.block_width);
    triple.c = get_state(member(*rj, "resolution", "c"), "resolution.c",
                         cfg.block_width);
    if (cfg.block_width % 2 != 0)
      bad("resolution", "block_width must be even for a resolution check");
    cfg.resolution = std::move(triple);
  }

  if (const json* gj = member_opt(root, "g")) {
    cfg.g = get_number(*gj, "g");
    if (!(cfg.g > 0)) bad("g", "must be > 0");
  }

  if (const json* nj = member_opt(root, "nid"))
    cfg.nid_over = get_string(member(*nj, "nid", "over"), "nid.over");

  if (const json* sj = member_opt(root, "simulation")) {
    if (const json* v = member_opt(*sj, "s")) cfg.sim_s = get_string(*v, "simulation.s");
    if (const json* v = member_opt(*sj, "r")) cfg.sim_r = get_string(*v, "simulation.r");
  }
  if (const json* sj = member_opt(root, "triangle")) {
    if (const json* v = member_opt(*sj, "r")) cfg.tri_r = get_string(*v, "triangle.r");
    if (const json* v = member_opt(*sj, "s")) cfg.tri_s = get_string(*v, "triangle.s");
  }
  if (const json* sj = member_opt(root, "gfit")) {
    if (const json* v = member_opt(*sj, "substrate"))
      cfg.gfit_set = get_string(*v, "gfit.substrate");
  }
  if (const json* sj = member_opt(root, "teleport")) {
    if (const json* v = member_opt(*sj, "tele"))
      cfg.tele_name = get_string(*v, "teleport.tele");
    if (const json* v = member_opt(*sj, "stay"))
      cfg.stay_name = get_string(*v, "teleport.stay");
  }

  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open config " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_experiment_config(text);
}

}  // namespace uaec
