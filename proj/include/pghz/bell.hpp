// The general Bell inequality for n parties with two settings each:
// S-parameter evaluation over a full correlation table, the
// closed-form quantum prediction for phase-GHZ states, and a brute-force
// enumeration of deterministic local strategies that certifies the classical
// bound.
//
// The S-parameter is reported in normalized form,
//   S = (1/2^n) sum_s | sum_k f(s, k) E(k) |,  f(s, k) = prod_j s_j^{k_j - 1},
// so the local-realistic bound is 1 and the quantum maximum for n = 4 is
// 2*sqrt(2). The unnormalized variant carries a bound of 2^n instead.
#pragma once

#include <array>
#include <vector>

#include "pghz/measurement.hpp"
#include "pghz/state.hpp"

namespace pghz {

// Predetermined +-1 outcomes, one pair per party (outcome for setting 1,
// outcome for setting 2).
struct DeterministicStrategy {
  std::vector<std::array<int, 2>> outcomes;

  // Product correlations E(k) = prod_j a_{j, k_j}.
  CorrelationTable correlation_table() const;
};

// Requires a complete table over all 2^n settings.
double gbi_s_parameter(const CorrelationTable& table);

// S_QM(theta) = 2(|cos theta| + |sin theta|) for the four-party phase-GHZ
// state; periodic with period pi/2.
double quantum_prediction(double theta);

struct LhvResult {
  double max_s = 0.0;
  DeterministicStrategy strategy;
};

// Exhaustively enumerates all 4^n deterministic strategies and returns the
// maximal S together with the first maximizing strategy in enumeration
// order. Convexity extends the bound to every local hidden variable model.
LhvResult lhv_max(int num_parties);

struct GbiResult {
  double s = 0.0;
  CorrelationTable table;
};

// Full correlation table of rho plus its S-parameter.
GbiResult gbi_from_state(const DensityMatrix& rho);

inline constexpr double kClassicalBound = 1.0;
inline constexpr double kQuantumMax = 2.8284271247461903;  // 2 sqrt(2)

}  // namespace pghz
