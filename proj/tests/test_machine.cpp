#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "uaec/machine.hpp"
#include "uaec/errors.hpp"

using namespace uaec;

namespace {

MachineConfig cfg(std::uint32_t depth, std::uint32_t steps, Bits aux = "") {
  return MachineConfig{steps, depth, std::move(aux)};
}

Bits random_program(std::mt19937_64& rng, std::size_t len) {
  Bits p(len, '0');
  for (auto& c : p)
    if (rng() & 1) c = '1';
  return p;
}

}  // namespace

TEST_CASE("HALT alone") {
  auto out = run_fixed(cfg(3, 10), "000");
  CHECK(out.status == RunStatus::Halted);
  CHECK(out.output == "");
  CHECK(out.consumed_bits == 3);
  CHECK(out.steps_used == 1);
}

TEST_CASE("OUT then HALT emits the initial zero cell") {
  auto out = run_fixed(cfg(6, 10), "100000");
  CHECK(out.status == RunStatus::Halted);
  CHECK(out.output == "0");
  CHECK(out.consumed_bits == 6);
  // The bit was emitted before the HALT opcode was fetched.
  REQUIRE(out.emission_profile.size() == 1);
  CHECK(out.emission_profile[0] == 3);
}

TEST_CASE("FLIP OUT HALT emits one") {
  // Hand trace: FLIP sets the cell, OUT emits '1' at 6 consumed bits,
  // HALT stops at 9.
  auto out = run_fixed(cfg(9, 10), "011100000");
  CHECK(out.status == RunStatus::Halted);
  CHECK(out.output == "1");
  CHECK(out.consumed_bits == 9);
  REQUIRE(out.emission_profile.size() == 1);
  CHECK(out.emission_profile[0] == 6);
  CHECK(out.steps_used == 3);
}

TEST_CASE("incomplete opcode is DepthExceeded") {
  auto out = run_fixed(cfg(3, 10), "00");
  CHECK(out.status == RunStatus::DepthExceeded);
  CHECK(out.consumed_bits == 0);
  CHECK(out.output == "");
}

TEST_CASE("JB without an open JZ faults even on a zero cell") {
  auto out = run_fixed(cfg(9, 10), "110");
  CHECK(out.status == RunStatus::Faulted);
  CHECK(out.consumed_bits == 3);
}

TEST_CASE("JZ skips its body on a zero cell") {
  // JZ scans past the matching JB (scanning OUT and JB costs 2 steps),
  // then HALT. Nothing is emitted.
  auto out = run_fixed(cfg(12, 20), "101100110000");
  CHECK(out.status == RunStatus::Halted);
  CHECK(out.output == "");
  CHECK(out.consumed_bits == 12);
  CHECK(out.steps_used == 4);  // JZ + 2 scanned + HALT
}

TEST_CASE("JZ falls through on a one cell and JB loops") {
  // FLIP; JZ; OUT; JB -> emits ones until fuel runs out.
  auto out = run_fixed(cfg(12, 50), "011101100110");
  CHECK(out.status == RunStatus::OutOfFuel);
  CHECK(out.steps_used == 50);
  CHECK(out.output.size() > 10);
  for (char c : out.output) CHECK(c == '1');
}

TEST_CASE("nested JZ matching") {
  // cell 0: outer JZ must skip over a nested JZ/JB pair.
  // JZ JZ OUT JB JB HALT
  auto out = run_fixed(cfg(18, 50), "101101100110110000");
  CHECK(out.status == RunStatus::Halted);
  CHECK(out.output == "");
  CHECK(out.consumed_bits == 18);
}

TEST_CASE("JZ scan reaching the depth cap faults") {
  // JZ with no JB in reach: the scan wants bits beyond depth_cap.
  auto out = run_fixed(cfg(6, 50), "101100");
  CHECK(out.status == RunStatus::Faulted);
  CHECK(out.consumed_bits == 6);
}

TEST_CASE("AUX copies and exhausts to zero") {
  // AUX OUT AUX OUT HALT against a 1-bit aux: "1" then 0.
  auto out = run_fixed(cfg(15, 50, "1"), "111100111100000");
  CHECK(out.status == RunStatus::Halted);
  CHECK(out.output == "10");

  // Same program, empty aux: both reads give 0.
  auto out2 = run_fixed(cfg(15, 50, ""), "111100111100000");
  CHECK(out2.status == RunStatus::Halted);
  CHECK(out2.output == "00");
}

TEST_CASE("AUX OUT HALT reads the conditioning bit") {
  auto out = run_fixed(cfg(9, 50, "1"), "111100000");
  CHECK(out.status == RunStatus::Halted);
  CHECK(out.output == "1");
}

TEST_CASE("LEFT and RIGHT address distinct cells") {
  // FLIP; RIGHT; OUT (fresh zero); LEFT; OUT (the flipped one); HALT.
  auto out = run_fixed(cfg(18, 50), "011010100001100000");
  CHECK(out.status == RunStatus::Halted);
  CHECK(out.output == "01");
}

TEST_CASE("execute: out-of-fuel before a fetch does not demand bits") {
  std::size_t demanded = 0;
  MachineConfig c = cfg(30, 1);
  auto out = execute(c, [&]() -> std::optional<int> {
    ++demanded;
    // LEFT opcodes forever.
    return (demanded % 3 == 1) ? 0 : (demanded % 3 == 2 ? 0 : 1);
  });
  CHECK(out.status == RunStatus::OutOfFuel);
  CHECK(out.steps_used == 1);
  CHECK(out.consumed_bits == 3);
  CHECK(demanded == 3);
}

TEST_CASE("determinism: identical oracles give identical outcomes") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Bits p = random_program(rng, 15);
    auto a = run_fixed(cfg(15, 40), p);
    auto b = run_fixed(cfg(15, 40), p);
    CHECK(a == b);
  }
}

TEST_CASE("prefix consistency: halted runs ignore suffixes") {
  std::mt19937_64 rng(11);
  int halted_seen = 0;
  for (int trial = 0; trial < 400; ++trial) {
    Bits p = random_program(rng, 12);
    auto base = run_fixed(cfg(18, 60), p);
    if (base.status != RunStatus::Halted) continue;
    ++halted_seen;
    Bits q = random_program(rng, 6);
    auto extended = run_fixed(cfg(18, 60), p + q);
    CHECK(extended.status == RunStatus::Halted);
    CHECK(extended.output == base.output);
    CHECK(extended.consumed_bits == base.consumed_bits);
  }
  CHECK(halted_seen > 5);
}

TEST_CASE("step accounting and output causality") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    std::uint32_t step_cap = 1 + static_cast<std::uint32_t>(rng() % 60);
    Bits p = random_program(rng, 15);
    auto out = run_fixed(cfg(15, step_cap), p);
    CHECK(out.steps_used <= step_cap);
    if (out.status == RunStatus::OutOfFuel) CHECK(out.steps_used == step_cap);
    CHECK(out.consumed_bits % 3 == 0);
    CHECK(out.consumed_bits <= 15);
    CHECK(out.emission_profile.size() == out.output.size());
    std::uint32_t prev = 0;
    for (auto c : out.emission_profile) {
      CHECK(c >= prev);
      CHECK(c <= out.consumed_bits);
      prev = c;
    }
    if (out.status == RunStatus::Halted) CHECK(out.consumed_bits >= 3);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(run_fixed(cfg(0, 10), "000"), Error);
  CHECK_THROWS_AS(run_fixed(cfg(3, 0), "000"), Error);
  CHECK_THROWS_AS(run_fixed(cfg(3, 10), "0000"), Error);  // longer than cap
  CHECK_THROWS_AS(run_fixed(cfg(3, 10), "0a0"), Error);
}
