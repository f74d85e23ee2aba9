// Entanglement witness W(theta) = I/2 - |PGHZ(theta)><PGHZ(theta)| for the
// four-photon phase-GHZ state: direct operator expectation, and the
// experimentally measurable decomposition into local correlation settings
// plus the two computational-basis populations.
//
// The decomposition rests on the operator identity
//   e^{-i theta} |H><V|^{x4} + e^{+i theta} |V><H|^{x4}
//     = (1/8) sum_k cos(theta - m_y(k) pi/2) sigma_{k_1} x ... x sigma_{k_4},
// where k ranges over the 16 sigma_x/sigma_y setting choices and m_y(k)
// counts the sigma_y factors. At theta = 0 or pi/2 half of the coefficients
// vanish, leaving 8 settings; at pi/4 all 16 contribute with weight
// 1/sqrt(2). Witness expectation then reads
//   tr(W rho) = 1/2 - (p_HHHH + p_VVVV)/2 - sum_k w_k E(k),
// with w_k = cos(theta - m_y(k) pi/2) / 16.
#pragma once

#include <string>
#include <vector>

#include "pghz/measurement.hpp"
#include "pghz/state.hpp"

namespace pghz {

struct WitnessOperator {
  double theta = 0.0;
  Matrix matrix;  // 16x16 Hermitian; spectrum {-1/2 (once), +1/2 (15 times)}
};

WitnessOperator witness_operator(double theta);

// tr(W(theta) rho) through the explicit operator. Algebraically equal to
// 1/2 - fidelity_pure_target(rho, phase_ghz(4, theta)).
double witness_expectation(const DensityMatrix& rho, double theta);

// One correlation setting together with its weight w_k in the decomposed
// witness expectation.
struct WitnessTerm {
  SettingVector setting;
  double weight;
};

// The correlation settings required at a supported phase (8 terms at 0 and
// pi/2, 16 at pi/4). Throws for theta outside {0, pi/4, pi/2}.
std::vector<WitnessTerm> witness_correlation_terms(double theta);

// Decomposed witness value from exact or measured correlations plus the
// HHHH/VVVV populations. Requires every setting named by
// witness_correlation_terms(theta) to be present in the table.
double witness_from_settings(const CorrelationTable& correlations, double p_hhhh,
                             double p_vvvv, double theta);

struct WitnessEstimate {
  double theta = 0.0;
  double value = 0.0;
  double sigma = 0.0;
  double significance = 0.0;  // |value| / sigma
  std::string method;         // "direct" or "decomposed"
};

// Decomposed witness from counting records: one record per required
// correlation setting plus one H/V-basis record supplying the populations.
// Standard errors are propagated in quadrature.
WitnessEstimate witness_from_counts(const std::vector<CountsRecord>& records,
                                    const CountsRecord& hv_record, double theta);

}  // namespace pghz
