#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <iostream>
#include <random>

#include "uaec/cosmos.hpp"
#include "uaec/errors.hpp"

using namespace uaec;

namespace {

MachineConfig cfg(std::uint32_t depth, std::uint32_t steps, Bits aux = "") {
  return MachineConfig{steps, depth, std::move(aux)};
}

// One-line CA stepper used as the oracle for gen_phi.
Bits step_row(const Bits& row, int rule) {
  Bits next(row.size(), '0');
  for (std::size_t i = 0; i < row.size(); ++i) {
    std::size_t l = (i + row.size() - 1) % row.size();
    std::size_t r = (i + 1) % row.size();
    int idx = (row[l] == '1') * 4 + (row[i] == '1') * 2 + (row[r] == '1');
    next[i] = (rule >> idx) & 1 ? '1' : '0';
  }
  return next;
}

}  // namespace

TEST_CASE("rule 0 clears everything") {
  Cosmos c = gen_phi(0, "10110", 2);
  CHECK(c.phi == "10110" + Bits(10, '0'));
}

TEST_CASE("rule 204 is the identity") {
  Cosmos c = gen_phi(204, "0110011", 3);
  for (int t = 0; t <= 3; ++t)
    CHECK(c.phi.substr(static_cast<std::size_t>(t) * 7, 7) == "0110011");
}

TEST_CASE("rule 110 matches an independent stepper") {
  Cosmos c = gen_phi(110, "00100", 3);
  Bits row = "00100";
  Bits expected = row;
  for (int t = 0; t < 3; ++t) {
    row = step_row(row, 110);
    expected += row;
  }
  CHECK(c.phi == expected);
  CHECK(c.phi.size() == 5 * 4);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    int rule = static_cast<int>(rng() % 256);
    Bits seed(3 + rng() % 8, '0');
    for (auto& ch : seed)
      if (rng() & 1) ch = '1';
    Cosmos c2 = gen_phi(rule, seed, 4);
    Bits r = seed, want = seed;
    for (int t = 0; t < 4; ++t) {
      r = step_row(r, rule);
      want += r;
    }
    CHECK(c2.phi == want);
  }
}

TEST_CASE("gen_phi domain errors") {
  CHECK_THROWS_AS(gen_phi(-1, "000", 1), Error);
  CHECK_THROWS_AS(gen_phi(256, "000", 1), Error);
  CHECK_THROWS_AS(gen_phi(110, "00", 1), Error);
  CHECK_THROWS_AS(gen_phi(110, "0a0", 1), Error);
  CHECK_THROWS_AS(gen_phi(110, "000", 0), Error);
}

TEST_CASE("window extraction") {
  Cosmos c = gen_phi(204, "0101", 1);  // phi = 01010101
  SubstrateSet w = windows_of(c, 2, "w");
  REQUIRE(w.members.size() == 2);  // distinct only
  CHECK(w.members[0].bits == "01");
  CHECK(w.members[1].bits == "10");
  SubstrateSet limited = windows_of(c, 2, "w", 1);
  CHECK(limited.members.size() == 1);
}

TEST_CASE("bit doubling") {
  SubstrateSet base{"base", {MindState{"0110"}, MindState{"0011"}}};
  SubstrateSet doubled = bit_double(base, "d");
  CHECK(doubled.members[0].bits == "0011");
  CHECK(doubled.members[1].bits == "0000");
}

TEST_CASE("sdf of a singleton is the conditional prior") {
  RunSet rs_phi = explore(cfg(9, 50, "1"));
  SubstrateSet z{"z", {MindState{"1"}}};
  CHECK(sdf(rs_phi, z).value ==
        m_cond_hat(rs_phi, "1").value.to_double());
  CHECK(!sdf(rs_phi, z).all_zero);
}

TEST_CASE("sdf ignores duplication and flags empty support") {
  RunSet rs_phi = explore(cfg(9, 50, "1"));
  SubstrateSet z{"z", {MindState{"1"}, MindState{"0"}}};
  SubstrateSet zz{"zz",
                  {MindState{"1"}, MindState{"0"}, MindState{"1"}, MindState{"0"}}};
  CHECK(sdf(rs_phi, z).value == doctest::Approx(sdf(rs_phi, zz).value).epsilon(1e-15));

  SubstrateSet unsupported{"u", {MindState{"10"}, MindState{"10"}}};
  // Width-2 "10" has no halting program at depth 9.
  SdfValue v = sdf(rs_phi, unsupported);
  CHECK(v.value == 0.0);
  CHECK(v.all_zero);
}

TEST_CASE("sdf of a union is the count-weighted mean of the parts") {
  RunSet rs_phi = explore(cfg(12, 100, "1"));
  SubstrateSet a{"a", {MindState{"0"}}};
  SubstrateSet b{"b", {MindState{"1"}, MindState{"0"}}};
  SubstrateSet both{"ab", {MindState{"0"}, MindState{"1"}, MindState{"0"}}};
  double expected = (1.0 * sdf(rs_phi, a).value + 2.0 * sdf(rs_phi, b).value) / 3.0;
  CHECK(sdf(rs_phi, both).value == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("simulation ratio identities") {
  RunSet rs_phi = explore(cfg(12, 100, "1"));
  SubstrateSet r{"R", {MindState{"0"}, MindState{"1"}}};

  SimulationResult same = simulation_ratio(rs_phi, r, r);
  CHECK(same.ratio == 1.0);
  CHECK(same.p_sim == 0.5);

  // Duplicating every member doubles |S| at equal sdf: ratio doubles.
  SubstrateSet doubled{"S", {MindState{"0"}, MindState{"1"}, MindState{"0"},
                             MindState{"1"}}};
  SimulationResult two = simulation_ratio(rs_phi, doubled, r);
  CHECK(two.ratio == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(two.p_sim == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(two.p_sim > same.p_sim);

  SubstrateSet empty_support{"E", {MindState{"10"}}};
  CHECK_THROWS_AS(simulation_ratio(rs_phi, r, empty_support), Error);
}

TEST_CASE("fit on a single point is exact") {
  std::vector<std::pair<double, double>> one = {{0.25, 0.5}};
  GFit fit = fit_g_values(one);
  CHECK(fit.g == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.residual_gsd == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("halving every rhs doubles g and keeps the residual") {
  std::mt19937_64 rng(9);
  std::vector<std::pair<double, double>> pairs, scaled;
  for (int i = 0; i < 12; ++i) {
    double lhs = std::ldexp(1.0 + static_cast<double>(rng() % 100) / 100.0,
                            -static_cast<int>(rng() % 20));
    double rhs = std::ldexp(1.0 + static_cast<double>(rng() % 100) / 100.0,
                            -static_cast<int>(rng() % 20));
    pairs.emplace_back(lhs, rhs);
    scaled.emplace_back(lhs, rhs / 2.0);
  }
  GFit base = fit_g_values(pairs);
  GFit twice = fit_g_values(scaled);
  CHECK(twice.g == doctest::Approx(2.0 * base.g).epsilon(1e-9));
  CHECK(twice.residual_gsd == doctest::Approx(base.residual_gsd).epsilon(1e-9));
}

TEST_CASE("closed form matches a grid search") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<std::pair<double, double>> pairs;
    int n = 3 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      double lhs = std::ldexp(1.0 + static_cast<double>(rng() % 1000) / 1000.0,
                              -static_cast<int>(5 + rng() % 25));
      double rhs = std::ldexp(1.0 + static_cast<double>(rng() % 1000) / 1000.0,
                              -static_cast<int>(5 + rng() % 25));
      pairs.emplace_back(lhs, rhs);
    }
    GFit fit = fit_g_values(pairs);

    // Coarse-to-fine scan of the sum of squared log residuals.
    auto objective = [&](double log2_g) {
      double s = 0;
      for (const auto& [lhs, rhs] : pairs) {
        double r = std::log2(lhs) - std::log2(rhs) - log2_g;
        s += r * r;
      }
      return s;
    };
    double lo = -40, hi = 40, best = 0;
    for (int round = 0; round < 4; ++round) {
      double step = (hi - lo) / 4000.0;
      double best_val = 1e300;
      for (double x = lo; x <= hi; x += step) {
        double v = objective(x);
        if (v < best_val) {
          best_val = v;
          best = x;
        }
      }
      lo = best - 2 * step;
      hi = best + 2 * step;
    }
    CHECK(std::abs(fit.log2_g - best) <=
          0.001 * std::max(1.0, std::abs(best)));
  }
}

TEST_CASE("fit_g end to end on a short universe") {
  // phi = "1" is short enough for the monotone prior to see it.
  RunSetProvider provider(cfg(12, 200));
  const RunSet& rs = provider.get("");
  const RunSet& rs_phi = provider.get("1");
  REQUIRE(!M_hat(rs, "1").value.is_zero());

  SubstrateSet a_set{"A", {MindState{"0"}, MindState{"1"}}};
  GFit fit = fit_g(rs, rs_phi, "1", a_set, 10);
  CHECK(fit.g > 0);
  CHECK(fit.residual_gsd >= 1.0);

  // Reproduce the closed form by hand.
  double m_phi = M_hat(rs, "1").value.to_double();
  double sum = 0;
  for (const auto& a : a_set.members)
    sum += std::log2(p_sigma_N(rs, a, 10).value.to_double()) -
           std::log2(m_phi * m_cond_hat(rs_phi, a.bits).value.to_double());
  CHECK(fit.log2_g == doctest::Approx(sum / 2.0).epsilon(1e-12));
}

TEST_CASE("fit_g is infeasible when phi is unreachable") {
  RunSetProvider provider(cfg(9, 50));
  Bits phi(40, '0');
  const RunSet& rs = provider.get("");
  const RunSet& rs_phi = provider.get(phi);
  SubstrateSet a_set{"A", {MindState{"0"}}};
  try {
    fit_g(rs, rs_phi, phi, a_set, 8);
    FAIL("expected infeasible");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::infeasible);
  }
}

TEST_CASE("triangle check on mirrored substrates") {
  RunSetProvider provider(cfg(12, 200));
  SubstrateSet r{"R", {MindState{"0"}, MindState{"1"}}};
  TriangleReport rep = triangle_check(provider, "1", r, r, 1.0, 10);
  // sdf(S)/sdf(R) = 1, so the bound ratio collapses onto the lhs.
  CHECK(rep.bound_ratio == doctest::Approx(rep.lhs).epsilon(1e-12));
  CHECK(rep.pairs_total == 4);
  CHECK(rep.pairs_excluded == 0);
  CHECK(rep.lhs > 0);
  std::cout << "[diagnostic] mirrored triangle lhs=" << rep.lhs
            << " within_g=" << rep.within_g << "\n";
}

TEST_CASE("triangle check counts excluded pairs") {
  RunSetProvider provider(cfg(12, 200));
  SubstrateSet r{"R", {MindState{"000"}}};
  // "010" has no block evidence at depth 12: that column drops out.
  SubstrateSet s{"S", {MindState{"000"}, MindState{"010"}}};
  TriangleReport rep = triangle_check(provider, "1", r, s, 1.0, 10);
  CHECK(rep.pairs_total == 2);
  CHECK(rep.pairs_excluded == 1);
}

TEST_CASE("triangle check with no support degenerates") {
  RunSetProvider provider(cfg(9, 50));
  SubstrateSet r{"R", {MindState{"10"}}};
  try {
    triangle_check(provider, "1", r, r, 1.0, 8);
    FAIL("expected degenerate");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate);
  }
}
