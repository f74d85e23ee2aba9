#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pghz/measurement.hpp"
#include "pghz/random.hpp"
#include "pghz/state.hpp"
#include "pghz/witness.hpp"
#include "test_util.hpp"

using namespace pghz;

namespace {

const double kThetas[] = {0.0, kPi / 4.0, kPi / 2.0};

DensityMatrix dephased_ghz(double theta, double visibility) {
  Matrix rho = pure_to_density(phase_ghz(4, theta)).entries();
  rho(0, 15) *= visibility;
  rho(15, 0) *= visibility;
  return DensityMatrix(4, std::move(rho));
}

}  // namespace

TEST_CASE("witness operator is Hermitian with the projector spectrum") {
  for (double theta : kThetas) {
    const WitnessOperator w = witness_operator(theta);
    CHECK(w.theta == theta);
    CHECK((w.matrix - w.matrix.adjoint()).cwiseAbs().maxCoeff() ==
          doctest::Approx(0.0).epsilon(1e-13));
    Eigen::SelfAdjointEigenSolver<Matrix> solver(w.matrix);
    const Eigen::VectorXd eigenvalues = solver.eigenvalues();
    CHECK(eigenvalues(0) == doctest::Approx(-0.5).epsilon(1e-12));
    for (int i = 1; i < 16; ++i) {
      CHECK(eigenvalues(i) == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
}

TEST_CASE("witness expectation on the target state is -1/2") {
  for (double theta : kThetas) {
    const DensityMatrix rho = pure_to_density(phase_ghz(4, theta));
    CHECK(std::abs(witness_expectation(rho, theta) + 0.5) < 1e-12);
  }
  // The direct route is not restricted to the decomposable phases.
  const double theta = 1.2345;
  const DensityMatrix rho = pure_to_density(phase_ghz(4, theta));
  CHECK(std::abs(witness_expectation(rho, theta) + 0.5) < 1e-12);
}

TEST_CASE("witness expectation equals 1/2 minus target fidelity") {
  RandomStream rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const DensityMatrix rho = testing::random_density(rng, 4);
    for (double theta : kThetas) {
      const double direct = witness_expectation(rho, theta);
      const double via_fidelity =
          0.5 - fidelity_pure_target(rho, phase_ghz(4, theta));
      CHECK(direct == doctest::Approx(via_fidelity).epsilon(1e-11));
    }
  }
}

TEST_CASE("witness is non-negative on product states") {
  RandomStream rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const DensityMatrix rho =
        pure_to_density(testing::random_product_state(rng, 4));
    for (double theta : kThetas) {
      CHECK(witness_expectation(rho, theta) >= -1e-10);
    }
  }
}

TEST_CASE("decomposition term counts and weights") {
  const auto at_zero = witness_correlation_terms(0.0);
  const auto at_quarter = witness_correlation_terms(kPi / 4.0);
  const auto at_half = witness_correlation_terms(kPi / 2.0);
  CHECK(at_zero.size() == 8);
  CHECK(at_quarter.size() == 16);
  CHECK(at_half.size() == 8);

  for (const WitnessTerm& term : at_zero) {
    const int m_y = term.setting.count_circular();
    CHECK(m_y % 2 == 0);
    CHECK(term.weight ==
          doctest::Approx((m_y % 4 == 0 ? 1.0 : -1.0) / 16.0).epsilon(1e-15));
  }
  for (const WitnessTerm& term : at_half) {
    const int m_y = term.setting.count_circular();
    CHECK(m_y % 2 == 1);
    CHECK(term.weight ==
          doctest::Approx((m_y % 4 == 1 ? 1.0 : -1.0) / 16.0).epsilon(1e-15));
  }
  for (const WitnessTerm& term : at_quarter) {
    CHECK(std::abs(term.weight) ==
          doctest::Approx(kInvSqrt2 / 16.0).epsilon(1e-15));
    const int m_y = term.setting.count_circular();
    const double expected =
        std::cos(kPi / 4.0 - m_y * kPi / 2.0) / 16.0;
    CHECK(term.weight == doctest::Approx(expected).epsilon(1e-12));
  }

  CHECK_THROWS_AS(witness_correlation_terms(0.3), std::invalid_argument);
  CHECK_THROWS_WITH_AS(witness_correlation_terms(kPi),
                       "witness decomposition supports theta in {0, pi/4, pi/2} only",
                       std::invalid_argument);
}

TEST_CASE("decomposed witness equals the direct trace on random states") {
  RandomStream rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const DensityMatrix rho = testing::random_density(rng, 4);
    const CorrelationTable table = full_correlation_table(rho);
    const auto hv = outcome_probabilities(
        rho, BasisVector(4, PolarizationBasis::HV));
    for (double theta : kThetas) {
      const double decomposed =
          witness_from_settings(table, hv.front(), hv.back(), theta);
      CHECK(std::abs(decomposed - witness_expectation(rho, theta)) < 1e-10);
    }
  }
}

TEST_CASE("decomposed witness on the ideal state") {
  for (double theta : kThetas) {
    const DensityMatrix rho = pure_to_density(phase_ghz(4, theta));
    const CorrelationTable table = full_correlation_table(rho);
    CHECK(std::abs(witness_from_settings(table, 0.5, 0.5, theta) + 0.5) < 1e-12);
  }
}

TEST_CASE("decomposed witness input validation") {
  const DensityMatrix rho = pure_to_density(phase_ghz(4, 0.0));
  const CorrelationTable full = full_correlation_table(rho);
  CHECK_THROWS_AS(witness_from_settings(full, 0.5, 0.5, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(witness_from_settings(full, 1.2, 0.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(witness_from_settings(full, 0.7, 0.7, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(witness_from_settings(full, -0.2, 0.5, 0.0),
                  std::invalid_argument);

  CorrelationTable incomplete(4);
  CHECK_THROWS_AS(witness_from_settings(incomplete, 0.5, 0.5, 0.0),
                  std::out_of_range);
}

TEST_CASE("witness from counts recovers -1/2 statistically") {
  const double theta = kPi / 4.0;
  const DensityMatrix rho = pure_to_density(phase_ghz(4, theta));
  RandomStream rng(2029);
  const std::uint64_t shots = 20000;

  std::vector<CountsRecord> records;
  for (const WitnessTerm& term : witness_correlation_terms(theta)) {
    CountsRecord record;
    record.bases = to_bases(term.setting);
    record.counts =
        rng.sample_counts(shots, outcome_probabilities(rho, term.setting));
    record.duration_s = 1.0;
    records.push_back(std::move(record));
  }
  CountsRecord hv;
  hv.bases = BasisVector(4, PolarizationBasis::HV);
  hv.counts = rng.sample_counts(
      shots, outcome_probabilities(rho, hv.bases));
  hv.duration_s = 1.0;

  const WitnessEstimate estimate = witness_from_counts(records, hv, theta);
  CHECK(estimate.method == "decomposed");
  CHECK(estimate.theta == theta);
  CHECK(estimate.sigma > 0.0);
  CHECK(std::abs(estimate.value + 0.5) < 5.0 * estimate.sigma);
  CHECK(estimate.significance ==
        doctest::Approx(std::abs(estimate.value) / estimate.sigma));

  SUBCASE("missing setting record") {
    records.pop_back();
    CHECK_THROWS_AS(witness_from_counts(records, hv, theta),
                    std::invalid_argument);
  }
  SUBCASE("population record must be H/V") {
    CHECK_THROWS_AS(witness_from_counts(records, records.front(), theta),
                    std::invalid_argument);
  }
  SUBCASE("population record must be populated") {
    CountsRecord empty;
    empty.bases = BasisVector(4, PolarizationBasis::HV);
    empty.counts.assign(16, 0);
    CHECK_THROWS_AS(witness_from_counts(records, empty, theta),
                    std::invalid_argument);
  }
}

TEST_CASE("dephasing scales the witness to -V/2") {
  for (double visibility : {1.0, 0.887, 0.762, 0.3}) {
    const DensityMatrix rho = dephased_ghz(kPi / 4.0, visibility);
    const double direct = witness_expectation(rho, kPi / 4.0);
    CHECK(direct == doctest::Approx(-visibility / 2.0).epsilon(1e-12));

    const CorrelationTable table = full_correlation_table(rho);
    const auto hv =
        outcome_probabilities(rho, BasisVector(4, PolarizationBasis::HV));
    const double decomposed =
        witness_from_settings(table, hv.front(), hv.back(), kPi / 4.0);
    CHECK(decomposed == doctest::Approx(direct).epsilon(1e-11));
  }
}
