// Noise channels and Monte Carlo of the four-photon counting experiment:
// Poissonian per-setting totals, multinomial outcome splits, S-parameter and
// witness error propagation, and standard-deviation significances.
#pragma once

#include <cstdint>
#include <vector>

#include "pghz/bell.hpp"
#include "pghz/measurement.hpp"
#include "pghz/state.hpp"
#include "pghz/witness.hpp"

namespace pghz {

enum class NoiseKind { kNone, kWhite, kDephasing, kDepolarizingLocal };

struct NoiseModel {
  NoiseKind kind = NoiseKind::kNone;
  double parameter = 1.0;  // p or V, in [0, 1]; ignored for kNone
};

// white: p rho + (1-p) I/16. dephasing: scale the |HH..><VV..| coherence and
// its conjugate by V. depolarizing_local: per-qubit depolarizing channel with
// parameter p on every qubit.
DensityMatrix apply_noise(const DensityMatrix& rho, const NoiseModel& model);

struct ExperimentConfig {
  double theta = kPi / 4.0;
  NoiseModel noise;
  double fourfold_rate_hz = 1.64;
  double duration_s = 300.0;  // per setting
  std::uint64_t seed = 0;
  double coincidence_window_ns = 2.5;  // metadata only, not simulated
  bool sampled = true;  // false: infinite-statistics expectations, zero sigma
};

// Throws std::invalid_argument when rates, durations, or noise parameters
// are out of range.
void validate_config(const ExperimentConfig& config);

struct BellRunResult {
  double s = 0.0;
  double sigma_s = 0.0;
  CorrelationTable table{4};
  std::vector<CorrelationEstimate> estimates;  // indexed by setting index
  std::vector<CountsRecord> records;           // indexed by setting index
};

// One full Bell run: all 16 sigma_x/sigma_y settings at the configured rate
// and duration. sigma_s propagates the per-setting standard errors through
// the S formula with each absolute value's sign frozen at the point estimate.
BellRunResult run_bell_experiment(const ExperimentConfig& config);

// (value - classical_bound) / sigma. Requires sigma > 0.
double significance(double value, double sigma, double classical_bound);

// |value| / sigma, the convention for witness negativity. Requires sigma > 0.
double witness_significance(double value, double sigma);

struct ScanPoint {
  double theta = 0.0;
  double s = 0.0;
  double sigma_s = 0.0;
  double quantum_prediction = 0.0;
};

// run_bell_experiment at each grid value with independently derived RNG
// streams; the noiseless 2(|cos| + |sin|) reference rides along per point.
std::vector<ScanPoint> theta_scan(const ExperimentConfig& config,
                                  const std::vector<double>& theta_grid);

struct WitnessRunResult {
  WitnessEstimate estimate;
  std::vector<CountsRecord> records;  // one per required correlation setting
  CountsRecord hv_record;             // computational-basis populations
};

// Counting simulation of the decomposed witness measurement at a supported
// phase: every required correlation setting plus the H/V population setting.
WitnessRunResult run_witness_experiment(const ExperimentConfig& config);

}  // namespace pghz
