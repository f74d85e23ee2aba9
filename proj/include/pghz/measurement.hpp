// Polarization measurement bases, outcome probabilities, and correlation
// functions E(k_1,...,k_n) from states or from photon counts.
//
// Outcome sign convention: the +1 eigenstate of each basis (H, D, or R) maps
// to outcome bit 0, the -1 eigenstate (V, A, or L) to bit 1. Setting k = 1 is
// the linear D/A basis (sigma_x), k = 2 the circular R/L basis (sigma_y).
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pghz/state.hpp"
#include "pghz/types.hpp"

namespace pghz {

enum class PolarizationBasis { HV, DA, RL };

// Orthonormal projector pair for one basis: plus/minus are the +1 and -1
// outcome projectors. They are idempotent, mutually orthogonal, and sum to
// the identity.
struct BasisProjectors {
  Eigen::Matrix2cd plus;
  Eigen::Matrix2cd minus;
};

BasisProjectors basis_projectors(PolarizationBasis basis);

// The single-qubit eigenket for an outcome bit (0 -> +1 eigenstate).
Eigen::Vector2cd basis_ket(PolarizationBasis basis, int outcome_bit);

// Per-party choice between the two Bell-test settings, k_j in {1, 2}.
class SettingVector {
 public:
  explicit SettingVector(std::vector<int> k);

  // Unpacks a setting index: bit j of `index` (party 0 most significant) is
  // set exactly when k_j = 2.
  static SettingVector from_index(int num_parties, std::size_t index);

  int size() const { return static_cast<int>(k_.size()); }
  int k(int party) const { return k_.at(static_cast<std::size_t>(party)); }
  const std::vector<int>& entries() const { return k_; }

  std::size_t index() const;
  // Number of circular (k = 2, sigma_y) settings.
  int count_circular() const;

  bool operator==(const SettingVector& other) const { return k_ == other.k_; }

 private:
  std::vector<int> k_;
};

// Per-party basis choice; generalizes SettingVector so that the H/V
// population measurement used by the witness fits the same record type.
using BasisVector = std::vector<PolarizationBasis>;

BasisVector to_bases(const SettingVector& setting);

// Counts for one measurement setting: 2^n outcome counts indexed by outcome
// bit-pattern, plus accumulation metadata.
struct CountsRecord {
  BasisVector bases;
  std::vector<std::uint64_t> counts;
  double duration_s = 0.0;
  std::uint64_t seed = 0;
  double rate_hz = 0.0;

  std::uint64_t total() const;
};

// Map from SettingVector to correlation value E in [-1, 1]; complete when
// all 2^n settings are present.
class CorrelationTable {
 public:
  explicit CorrelationTable(int num_parties);

  int num_parties() const { return num_parties_; }
  std::size_t num_settings() const { return values_.size(); }

  void set(const SettingVector& setting, double e);
  double at(const SettingVector& setting) const;
  bool contains(const SettingVector& setting) const;
  bool complete() const;
  std::size_t size() const;

 private:
  int num_parties_;
  std::vector<std::optional<double>> values_;
};

// Born-rule probabilities over the 2^n outcome bit-patterns; clamped at zero
// against floating-point noise (negative values beyond -1e-12 are an error).
std::vector<double> outcome_probabilities(const DensityMatrix& rho,
                                          const BasisVector& bases);
std::vector<double> outcome_probabilities(const DensityMatrix& rho,
                                          const SettingVector& setting);

// E = sum over outcomes of (product of +-1) x probability.
double correlation_from_state(const DensityMatrix& rho, const SettingVector& setting);

// The same correlation as tr(rho sigma_{k_1} x ... x sigma_{k_n}), computed
// through an explicit Pauli tensor product. Kept as an independent route for
// cross-checking correlation_from_state.
double correlation_from_pauli_trace(const DensityMatrix& rho,
                                    const SettingVector& setting);

// sigma_{k_1} x ... x sigma_{k_n} as a dense matrix.
Matrix pauli_tensor(const SettingVector& setting);

struct CorrelationEstimate {
  double e = 0.0;
  double sigma = 0.0;  // multinomial standard error sqrt((1 - E^2)/N)
};

// Parity-weighted average of the counts. Requires a D/A-R/L record with
// positive total counts.
CorrelationEstimate correlation_from_counts(const CountsRecord& record);

CorrelationTable full_correlation_table(const DensityMatrix& rho);

}  // namespace pghz
