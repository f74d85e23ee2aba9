#include "pghz/witness.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace pghz {

namespace {

enum class Phase { kZero, kQuarter, kHalf };

Phase classify_theta(double theta) {
  constexpr double tol = 1e-9;
  if (std::abs(theta) < tol) return Phase::kZero;
  if (std::abs(theta - kPi / 4.0) < tol) return Phase::kQuarter;
  if (std::abs(theta - kPi / 2.0) < tol) return Phase::kHalf;
  throw std::invalid_argument(
      "witness decomposition supports theta in {0, pi/4, pi/2} only");
}

// cos(theta - m_y pi/2) / 16 evaluated exactly for the supported phases;
// zero marks settings absent from the decomposition.
double term_weight(Phase phase, int m_y) {
  const double unit = 1.0 / 16.0;
  switch (phase) {
    case Phase::kZero:
      if (m_y % 2 != 0) return 0.0;
      return (m_y % 4 == 0) ? unit : -unit;
    case Phase::kHalf:
      if (m_y % 2 == 0) return 0.0;
      return (m_y % 4 == 1) ? unit : -unit;
    case Phase::kQuarter:
      return ((m_y % 4 == 0 || m_y % 4 == 1) ? unit : -unit) * kInvSqrt2;
  }
  return 0.0;
}

std::string setting_label(const SettingVector& setting) {
  std::string label;
  for (int j = 0; j < setting.size(); ++j) {
    label += static_cast<char>('0' + setting.k(j));
  }
  return label;
}

}  // namespace

WitnessOperator witness_operator(double theta) {
  const StateVector ghz = phase_ghz(4, theta);
  const Vector& amps = ghz.amplitudes();
  Matrix w = 0.5 * Matrix::Identity(16, 16);
  w -= amps * amps.adjoint();
  return WitnessOperator{theta, std::move(w)};
}

double witness_expectation(const DensityMatrix& rho, double theta) {
  const WitnessOperator w = witness_operator(theta);
  const Complex value = (w.matrix * rho.entries()).trace();
  return value.real();
}

std::vector<WitnessTerm> witness_correlation_terms(double theta) {
  const Phase phase = classify_theta(theta);
  std::vector<WitnessTerm> terms;
  for (int index = 0; index < 16; ++index) {
    const int m_y = std::popcount(static_cast<unsigned>(index));
    const double weight = term_weight(phase, m_y);
    if (weight == 0.0) continue;
    terms.push_back(WitnessTerm{
        SettingVector::from_index(4, static_cast<std::size_t>(index)), weight});
  }
  return terms;
}

double witness_from_settings(const CorrelationTable& correlations, double p_hhhh,
                             double p_vvvv, double theta) {
  constexpr double tol = 1e-9;
  if (p_hhhh < -tol || p_hhhh > 1.0 + tol || p_vvvv < -tol || p_vvvv > 1.0 + tol ||
      p_hhhh + p_vvvv > 1.0 + tol) {
    throw std::invalid_argument("population probabilities outside [0, 1]");
  }
  double value = 0.5 - 0.5 * (p_hhhh + p_vvvv);
  for (const WitnessTerm& term : witness_correlation_terms(theta)) {
    value -= term.weight * correlations.at(term.setting);
  }
  return value;
}

WitnessEstimate witness_from_counts(const std::vector<CountsRecord>& records,
                                    const CountsRecord& hv_record, double theta) {
  const std::vector<WitnessTerm> terms = witness_correlation_terms(theta);

  for (PolarizationBasis basis : hv_record.bases) {
    if (basis != PolarizationBasis::HV) {
      throw std::invalid_argument("population record must use the H/V basis");
    }
  }
  const std::uint64_t hv_total = hv_record.total();
  if (hv_total == 0) {
    throw std::invalid_argument("population record has zero total counts");
  }
  const auto n = static_cast<double>(hv_total);
  const double p_hhhh = static_cast<double>(hv_record.counts.front()) / n;
  const double p_vvvv = static_cast<double>(hv_record.counts.back()) / n;
  const double q = p_hhhh + p_vvvv;
  const double sigma_q = std::sqrt(std::max(q * (1.0 - q), 0.0) / n);

  double value = 0.5 - 0.5 * q;
  double variance = 0.25 * sigma_q * sigma_q;
  for (const WitnessTerm& term : terms) {
    const BasisVector bases = to_bases(term.setting);
    const CountsRecord* match = nullptr;
    for (const CountsRecord& record : records) {
      if (record.bases == bases) {
        match = &record;
        break;
      }
    }
    if (match == nullptr) {
      throw std::invalid_argument("missing counts for witness setting " +
                                  setting_label(term.setting));
    }
    const CorrelationEstimate estimate = correlation_from_counts(*match);
    value -= term.weight * estimate.e;
    variance += term.weight * term.weight * estimate.sigma * estimate.sigma;
  }

  WitnessEstimate result;
  result.theta = theta;
  result.value = value;
  result.sigma = std::sqrt(variance);
  result.significance = result.sigma > 0.0
                            ? std::abs(value) / result.sigma
                            : std::numeric_limits<double>::infinity();
  result.method = "decomposed";
  return result;
}

}  // namespace pghz
