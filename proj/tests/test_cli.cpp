#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include <json.hpp>

#include "uaec/config.hpp"
#include "uaec/errors.hpp"

using namespace uaec;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CmdResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path err_file = fs::temp_directory_path() /
                      ("uaec_cli_err_" + std::to_string(::getpid()) + "_" +
                       std::to_string(counter++));
  std::string cmd = std::string(UAEC_CLI_PATH) + " " + args + " 2>" +
                    err_file.string();
  CmdResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    res.out.append(buf.data(), n);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream err_in(err_file);
  res.err.assign((std::istreambuf_iterator<char>(err_in)),
                 std::istreambuf_iterator<char>());
  fs::remove(err_file);
  return res;
}

std::string data_file(const char* name) {
  return (fs::path(UAEC_TEST_DATA_DIR) / name).string();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("uaec_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("enumerate writes a loadable, reproducible cache") {
  TempDir tmp;
  auto out1 = (tmp.path / "d9a.uaec").string();
  auto out2 = (tmp.path / "d9b.uaec").string();
  CmdResult r1 = run_cli("enumerate --depth 9 --steps 50 --out " + out1);
  REQUIRE(r1.exit_code == 0);
  CmdResult r2 = run_cli("enumerate --depth 9 --steps 50 --out " + out2);
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp(out1) == slurp(out2));

  RunSet rs = load_runset(out1);
  CHECK(rs.config.depth_cap == 9);
  CHECK(rs.config.step_cap == 50);
  CHECK(rs.records.size() == 316);

  json meta = json::parse(r1.out);
  CHECK(meta["records"] == 316);

  // An aux tape lands in the header and the canonical name.
  CmdResult r3 = run_cli("enumerate --depth 9 --steps 50 --aux 1011 --cache-dir " +
                         tmp.path.string());
  REQUIRE(r3.exit_code == 0);
  json meta3 = json::parse(r3.out);
  CHECK(meta3["aux_bits"] == 4);
  CHECK(fs::exists(tmp.path / cache_file_name({50, 9, "1011"})));
}

TEST_CASE("prior queries") {
  TempDir tmp;
  auto d3 = (tmp.path / "d3.uaec").string();
  REQUIRE(run_cli("enumerate --depth 3 --steps 10 --out " + d3).exit_code == 0);

  CmdResult m = run_cli("prior m --x \"\" --cache " + d3);
  REQUIRE(m.exit_code == 0);
  json jm = json::parse(m.out);
  CHECK(jm["num"] == 1);
  CHECK(jm["den"] == 8);
  CHECK(jm["log2"] == -3.0);
  CHECK(jm["depth_cap"] == 3);

  CmdResult nat = run_cli("prior nat --n 1 --cache " + d3);
  REQUIRE(nat.exit_code == 0);
  json jn = json::parse(nat.out);
  CHECK(jn["num"] == jm["num"]);
  CHECK(jn["den"] == jm["den"]);

  CmdResult big_m = run_cli("prior M --x \"\" --cache " + d3);
  REQUIRE(big_m.exit_code == 0);
  CHECK(json::parse(big_m.out)["num"] == 1);
  CHECK(json::parse(big_m.out)["den"] == 1);

  CmdResult missing = run_cli("prior m --x \"\" --cache " + d3 + ".nope");
  CHECK(missing.exit_code == 3);
  CHECK(missing.err.find("io error") != std::string::npos);

  // Conditional prior needs the aux cache it was built with.
  auto d9y = (tmp.path / "d9y.uaec").string();
  REQUIRE(run_cli("enumerate --depth 9 --steps 50 --aux 1 --out " + d9y)
              .exit_code == 0);
  CmdResult cond = run_cli("prior cond --x 1 --cache " + d9y);
  REQUIRE(cond.exit_code == 0);
  json jc = json::parse(cond.out);
  CHECK(jc["num"] == 1);
  CHECK(jc["den"] == 256);

  // The unconditional kinds refuse a conditional cache.
  CHECK(run_cli("prior m --x 1 --cache " + d9y).exit_code == 1);
}

TEST_CASE("weight command") {
  TempDir tmp;
  auto d12 = (tmp.path / "d12.uaec").string();
  auto d12a = (tmp.path / "d12a.uaec").string();
  REQUIRE(run_cli("enumerate --depth 12 --steps 200 --out " + d12).exit_code == 0);
  REQUIRE(run_cli("enumerate --depth 12 --steps 200 --aux 0 --out " + d12a)
              .exit_code == 0);

  CmdResult r = run_cli("weight --a 0 --b 0 --cache " + d12 +
                        " --cond-cache " + d12a + " --n-max 10");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["definitional"].get<double>() > 0);
  CHECK(j["fast_ratio"].get<double>() >= 0);
  CHECK(j["conditional"].get<double>() > 0);
  CHECK(j["definitional_exact"]["den"]["num"].get<std::uint64_t>() > 0);

  // Mismatched conditioning cache is a config error.
  CmdResult bad = run_cli("weight --a 1 --b 0 --cache " + d12 +
                          " --cond-cache " + d12a);
  CHECK(bad.exit_code == 1);
}

TEST_CASE("teleport identity via config") {
  TempDir tmp;
  CmdResult r = run_cli("--cache-dir " + tmp.path.string() +
                        " experiment teleport --config " +
                        data_file("teleport_identity.json") + " --build-cache");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["experiment"] == "teleport");
  CHECK(j["values"]["ratio"] == 1.0);
}

TEST_CASE("simulation identity via config") {
  TempDir tmp;
  CmdResult r = run_cli("--cache-dir " + tmp.path.string() +
                        " experiment simulation --config " +
                        data_file("simulation_identity.json") + " --build-cache");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["values"]["ratio"] == 1.0);
  CHECK(j["values"]["p_sim"] == 0.5);
}

TEST_CASE("degenerate ethics exits with code 2") {
  TempDir tmp;
  CmdResult r = run_cli("--cache-dir " + tmp.path.string() +
                        " experiment ethics --config " +
                        data_file("ethics_degenerate.json") + " --build-cache");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("degenerate") != std::string::npos);
}

TEST_CASE("gfit on a reachable universe") {
  TempDir tmp;
  CmdResult r = run_cli("--cache-dir " + tmp.path.string() +
                        " experiment gfit --config " +
                        data_file("gfit_feasible.json") + " --build-cache");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["values"]["g"].get<double>() > 0);
  CHECK(j["values"]["residual_gsd"].get<double>() >= 1.0);
}

TEST_CASE("gfit on an unreachable universe exits with code 2") {
  TempDir tmp;
  CmdResult r = run_cli("--cache-dir " + tmp.path.string() +
                        " experiment gfit --config " +
                        data_file("pipeline_d15.json") + " --build-cache");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("infeasible") != std::string::npos);
}

TEST_CASE("resolution experiment via config") {
  TempDir tmp;
  CmdResult r = run_cli("--cache-dir " + tmp.path.string() +
                        " experiment resolution --config " +
                        data_file("pipeline_d15.json") + " --build-cache");
  REQUIRE(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["values"].contains("log2_deviation"));
  CHECK(j["values"]["hi_width"] == 4);
  CHECK(j["values"]["lo_width"] == 2);
}

TEST_CASE("config errors identify the field") {
  CmdResult r = run_cli("experiment teleport --config " + data_file("bad_config.json"));
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("machine.step_cap") != std::string::npos);

  CmdResult missing = run_cli("experiment teleport --config /nonexistent.json");
  CHECK(missing.exit_code == 3);
}

TEST_CASE("missing caches without --build-cache are an io error") {
  TempDir tmp;
  CmdResult r = run_cli("--cache-dir " + tmp.path.string() +
                        " experiment teleport --config " +
                        data_file("teleport_identity.json"));
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("cache") != std::string::npos);
}

TEST_CASE("csv format") {
  TempDir tmp;
  auto d3 = (tmp.path / "d3.uaec").string();
  REQUIRE(run_cli("enumerate --depth 3 --steps 10 --out " + d3).exit_code == 0);
  CmdResult r = run_cli("--format csv prior m --x \"\" --cache " + d3);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("key,value") == 0);
  CHECK(r.out.find("num,1") != std::string::npos);
  CHECK(r.out.find("den,8") != std::string::npos);
}

TEST_CASE("config parsing pins down the offending field") {
  auto expect_config_error = [](const std::string& text, const char* needle) {
    try {
      parse_experiment_config(text);
      FAIL_CHECK("expected a config error for ", needle);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::config);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  expect_config_error("not json", "parse failure");
  expect_config_error(R"({"machine": {"depth_cap": 9}, "block_width": 1})",
                      "machine.step_cap");
  expect_config_error(
      R"({"machine": {"depth_cap": 9, "step_cap": 10}, "block_width": 2,
          "timelines": [{"agent": "a", "states": ["01"]},
                        {"agent": "b", "states": ["01"]}]})",
      "already belongs to another agent");
  expect_config_error(
      R"({"machine": {"depth_cap": 9, "step_cap": 10}, "block_width": 2,
          "scenarios": {"s": {"pairs": [{"a": "01", "b": "011", "p": 1.0}]}}})",
      "width");
  expect_config_error(
      R"({"machine": {"depth_cap": 9, "step_cap": 10}, "block_width": 2,
          "coarsen": "sideways"})",
      "coarsen");
  expect_config_error(
      R"({"machine": {"depth_cap": 9, "step_cap": 10}, "block_width": 2,
          "substrates": {"S": {"transform": {"of": "R", "op": "bit_double"}}}})",
      "substrates.S.transform.of");
  expect_config_error(
      R"({"machine": {"depth_cap": 9, "step_cap": 10}, "block_width": 2,
          "utility": {"kind": "lookup_table", "table": {"01": 3.0}}})",
      "utility.table");

  // A valid config resolves generators.
  ExperimentConfig cfg = load_experiment_config(data_file("pipeline_d15.json"));
  CHECK(cfg.cosmos.has_value());
  CHECK(cfg.substrate("R").members.size() == 13);
  CHECK(cfg.substrate("S").members.size() == 13);
  CHECK(cfg.scenario("tele").pairs.size() == 1);
  CHECK(cfg.timelines.size() == 2);
}

TEST_CASE("experiment reports rerun byte-identically") {
  TempDir tmp;
  std::string args = "--cache-dir " + tmp.path.string() +
                     " experiment teleport --config " +
                     data_file("teleport_identity.json") + " --build-cache";
  CmdResult r1 = run_cli(args);
  CmdResult r2 = run_cli(args);
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  CHECK(r1.out == r2.out);
  CHECK(!r1.out.empty());
}
