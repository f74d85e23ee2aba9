// Exact linear algebra for small qubit registers: pure states, density
// matrices, local operators, and the Bell-pair / GHZ construction pipeline.
//
// Basis convention, used bit-exactly everywhere: |H> -> 0, |V> -> 1, and
// qubit 0 is the most significant bit of the computational-basis index (so
// the experiment's "photon 1" is qubit 0 and "photon 4" is qubit 3).
#pragma once

#include <cstddef>
#include <utility>

#include "pghz/types.hpp"

namespace pghz {

// Pure state of n qubits: 2^n complex amplitudes, unit norm within 1e-12.
// Immutable after construction; all operations below are pure functions.
class StateVector {
 public:
  StateVector(int num_qubits, Vector amplitudes);

  static StateVector basis_state(int num_qubits, std::size_t index);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t index) const {
    return amplitudes_(static_cast<Eigen::Index>(index));
  }

  // <this|other>
  Complex overlap(const StateVector& other) const;

 private:
  int num_qubits_;
  Vector amplitudes_;
};

// 2^n x 2^n Hermitian, positive-semidefinite, trace-1 matrix. The
// constructor enforces all three invariants (Hermiticity and trace within
// 1e-12, eigenvalues >= -1e-10) and throws std::invalid_argument otherwise.
class DensityMatrix {
 public:
  DensityMatrix(int num_qubits, Matrix entries);

  static DensityMatrix maximally_mixed(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }

 private:
  int num_qubits_;
  Matrix entries_;
};

// A 2x2 operator acting on one qubit of a register.
struct LocalOperator {
  int qubit = 0;
  Eigen::Matrix2cd matrix = Eigen::Matrix2cd::Identity();

  bool is_unitary(double tol = kHermTol) const;
};

// U(theta) = |H><H| + e^{i theta} |V><V| on the given qubit.
LocalOperator local_phase_operator(int qubit, double theta);

// (|HV> + |VH>)/sqrt(2)
StateVector bell_psi_plus();

// (|HH> + |VV>)/sqrt(2)
StateVector bell_phi_plus();

// (|H...H> + e^{i theta} |V...V>)/sqrt(2) on num_qubits >= 2 qubits.
StateVector phase_ghz(int num_qubits, double theta);

// Multiplies every amplitude with |V> on `qubit` by e^{i theta}. Preserves
// all amplitude magnitudes exactly.
StateVector apply_local_phase(const StateVector& state, int qubit, double theta);

StateVector apply_local_operator(const StateVector& state, const LocalOperator& op);

struct PbsFusionResult {
  StateVector state;
  double success_probability;
};

// Post-selects the subspace where both idler qubits carry equal polarization
// (the coincidence-transmitting PBS outcome), renormalizes, and reports the
// squared norm of the kept component. Throws std::runtime_error when the
// post-selection annihilates the state.
PbsFusionResult pbs_fusion(const StateVector& state, std::pair<int, int> idler_pair);

StateVector tensor(const StateVector& a, const StateVector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

DensityMatrix pure_to_density(const StateVector& psi);

// <psi|rho|psi>, clamped to [0, 1] with 1e-10 slack.
double fidelity_pure_target(const DensityMatrix& rho, const StateVector& psi);

// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 between mixed states.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace pghz
