#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "pghz/bell.hpp"
#include "pghz/random.hpp"
#include "pghz/state.hpp"
#include "test_util.hpp"

using namespace pghz;

TEST_CASE("quantum prediction hits the landmark phases") {
  CHECK(quantum_prediction(0.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(quantum_prediction(kPi / 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(quantum_prediction(kPi / 4.0) ==
        doctest::Approx(kQuantumMax).epsilon(1e-14));
  CHECK(quantum_prediction(kPi / 4.0) > kClassicalBound);
}

TEST_CASE("quantum prediction has period pi/2") {
  RandomStream rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const double theta = rng.uniform() * 2.0 * kPi;
    CHECK(quantum_prediction(theta) ==
          doctest::Approx(quantum_prediction(theta + kPi / 2.0)).epsilon(1e-10));
  }
}

TEST_CASE("S parameter of phase-GHZ states at landmark phases") {
  const double s0 = gbi_from_state(pure_to_density(phase_ghz(4, 0.0))).s;
  const double s2 = gbi_from_state(pure_to_density(phase_ghz(4, kPi / 2.0))).s;
  const double s4 = gbi_from_state(pure_to_density(phase_ghz(4, kPi / 4.0))).s;
  CHECK(std::abs(s0 - 2.0) < 1e-10);
  CHECK(std::abs(s2 - 2.0) < 1e-10);
  CHECK(std::abs(s4 - kQuantumMax) < 1e-10);
}

TEST_CASE("S parameter matches the closed form across a phase grid") {
  for (int i = 0; i < 32; ++i) {
    const double theta = 2.0 * kPi * i / 32.0;
    const GbiResult result = gbi_from_state(pure_to_density(phase_ghz(4, theta)));
    CHECK(std::abs(result.s - quantum_prediction(theta)) < 1e-10);
    CHECK(result.table.complete());
  }
}

TEST_CASE("incomplete correlation tables are rejected") {
  CorrelationTable table(4);
  table.set(SettingVector::from_index(4, 0), 1.0);
  CHECK_THROWS_AS(gbi_s_parameter(table), std::invalid_argument);
}

TEST_CASE("deterministic strategies produce product correlations") {
  DeterministicStrategy strategy;
  strategy.outcomes = {{1, -1}, {1, 1}};
  const CorrelationTable table = strategy.correlation_table();
  CHECK(table.at(SettingVector({1, 1})) == 1.0);
  CHECK(table.at(SettingVector({1, 2})) == 1.0);
  CHECK(table.at(SettingVector({2, 1})) == -1.0);
  CHECK(table.at(SettingVector({2, 2})) == -1.0);
}

TEST_CASE("every deterministic strategy scores exactly the classical bound") {
  RandomStream rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    DeterministicStrategy strategy;
    strategy.outcomes.resize(4);
    for (auto& pair : strategy.outcomes) {
      pair = {rng.uniform() < 0.5 ? 1 : -1, rng.uniform() < 0.5 ? 1 : -1};
    }
    CHECK(std::abs(gbi_s_parameter(strategy.correlation_table()) - 1.0) < 1e-12);
  }
}

TEST_CASE("exhaustive LHV maximum equals the classical bound") {
  const LhvResult result = lhv_max(4);
  CHECK(std::abs(result.max_s - kClassicalBound) < 1e-12);
  CHECK(result.strategy.outcomes.size() == 4);
  CHECK(gbi_s_parameter(result.strategy.correlation_table()) ==
        doctest::Approx(result.max_s).epsilon(1e-14));

  CHECK(std::abs(lhv_max(2).max_s - 1.0) < 1e-12);
  CHECK_THROWS_AS(lhv_max(0), std::invalid_argument);
  CHECK_THROWS_AS(lhv_max(7), std::invalid_argument);
}

TEST_CASE("convex mixtures of strategies stay within the bound") {
  RandomStream rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    DeterministicStrategy a;
    DeterministicStrategy b;
    a.outcomes.resize(4);
    b.outcomes.resize(4);
    for (int party = 0; party < 4; ++party) {
      a.outcomes[party] = {rng.uniform() < 0.5 ? 1 : -1,
                           rng.uniform() < 0.5 ? 1 : -1};
      b.outcomes[party] = {rng.uniform() < 0.5 ? 1 : -1,
                           rng.uniform() < 0.5 ? 1 : -1};
    }
    const CorrelationTable ta = a.correlation_table();
    const CorrelationTable tb = b.correlation_table();
    const double lambda = rng.uniform();
    CorrelationTable mixed(4);
    for (std::size_t index = 0; index < 16; ++index) {
      const SettingVector setting = SettingVector::from_index(4, index);
      mixed.set(setting, lambda * ta.at(setting) + (1.0 - lambda) * tb.at(setting));
    }
    CHECK(gbi_s_parameter(mixed) <= 1.0 + 1e-12);
  }
}

TEST_CASE("mixed noisy states score below pure GHZ") {
  RandomStream rng(29);
  const double s_pure = gbi_from_state(pure_to_density(phase_ghz(4, kPi / 4.0))).s;
  for (int trial = 0; trial < 5; ++trial) {
    const DensityMatrix rho = testing::random_density(rng, 4);
    CHECK(gbi_from_state(rho).s <= s_pure + 1e-10);
  }
}
