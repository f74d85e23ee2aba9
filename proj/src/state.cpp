#include "pghz/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pghz {

namespace {

std::size_t checked_dim(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, " +
                                std::to_string(kMaxQubits) + "], got " +
                                std::to_string(num_qubits));
  }
  return std::size_t{1} << num_qubits;
}

// Bit of `qubit` (0 = most significant) within a basis index of an n-qubit
// register.
int qubit_bit(std::size_t index, int qubit, int num_qubits) {
  return static_cast<int>((index >> (num_qubits - 1 - qubit)) & 1u);
}

}  // namespace

StateVector::StateVector(int num_qubits, Vector amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  const std::size_t dim = checked_dim(num_qubits);
  if (static_cast<std::size_t>(amplitudes_.size()) != dim) {
    throw std::invalid_argument("amplitude vector has length " +
                                std::to_string(amplitudes_.size()) +
                                ", expected 2^n = " + std::to_string(dim));
  }
  const double sum_sq = amplitudes_.squaredNorm();
  if (std::abs(sum_sq - 1.0) > kNormTol) {
    throw std::invalid_argument("state vector is not normalized: |amp|^2 = " +
                                std::to_string(sum_sq));
  }
}

StateVector StateVector::basis_state(int num_qubits, std::size_t index) {
  const std::size_t dim = checked_dim(num_qubits);
  if (index >= dim) {
    throw std::invalid_argument("basis index out of range");
  }
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(dim));
  amps(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(num_qubits, std::move(amps));
}

Complex StateVector::overlap(const StateVector& other) const {
  if (num_qubits_ != other.num_qubits_) {
    throw std::invalid_argument("overlap: qubit counts differ");
  }
  return amplitudes_.dot(other.amplitudes_);
}

DensityMatrix::DensityMatrix(int num_qubits, Matrix entries)
    : num_qubits_(num_qubits), entries_(std::move(entries)) {
  const std::size_t dim = checked_dim(num_qubits);
  if (static_cast<std::size_t>(entries_.rows()) != dim ||
      static_cast<std::size_t>(entries_.cols()) != dim) {
    throw std::invalid_argument("density matrix has wrong dimensions");
  }
  const double herm_err = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > kHermTol) {
    throw std::invalid_argument("density matrix is not Hermitian (max deviation " +
                                std::to_string(herm_err) + ")");
  }
  const Complex tr = entries_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kHermTol) {
    throw std::invalid_argument("density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kPsdTol) {
    throw std::invalid_argument("density matrix has eigenvalue below -1e-10");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int num_qubits) {
  const auto dim = static_cast<Eigen::Index>(checked_dim(num_qubits));
  return DensityMatrix(num_qubits,
                       Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

bool LocalOperator::is_unitary(double tol) const {
  return (matrix.adjoint() * matrix - Eigen::Matrix2cd::Identity())
             .cwiseAbs()
             .maxCoeff() <= tol;
}

LocalOperator local_phase_operator(int qubit, double theta) {
  LocalOperator op;
  op.qubit = qubit;
  op.matrix << 1.0, 0.0, 0.0, std::polar(1.0, theta);
  return op;
}

StateVector bell_psi_plus() {
  Vector amps = Vector::Zero(4);
  amps(1) = kInvSqrt2;  // |HV>
  amps(2) = kInvSqrt2;  // |VH>
  return StateVector(2, std::move(amps));
}

StateVector bell_phi_plus() {
  Vector amps = Vector::Zero(4);
  amps(0) = kInvSqrt2;  // |HH>
  amps(3) = kInvSqrt2;  // |VV>
  return StateVector(2, std::move(amps));
}

StateVector phase_ghz(int num_qubits, double theta) {
  if (num_qubits < 2) {
    throw std::invalid_argument("phase_ghz requires at least 2 qubits");
  }
  const std::size_t dim = checked_dim(num_qubits);
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(dim));
  amps(0) = kInvSqrt2;
  amps(static_cast<Eigen::Index>(dim - 1)) = kInvSqrt2 * std::polar(1.0, theta);
  return StateVector(num_qubits, std::move(amps));
}

StateVector apply_local_phase(const StateVector& state, int qubit, double theta) {
  const int n = state.num_qubits();
  if (qubit < 0 || qubit >= n) {
    throw std::invalid_argument("apply_local_phase: qubit index out of range");
  }
  const Complex phase = std::polar(1.0, theta);
  Vector amps = state.amplitudes();
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (qubit_bit(i, qubit, n) == 1) {
      amps(static_cast<Eigen::Index>(i)) *= phase;
    }
  }
  return StateVector(n, std::move(amps));
}

StateVector apply_local_operator(const StateVector& state, const LocalOperator& op) {
  const int n = state.num_qubits();
  if (op.qubit < 0 || op.qubit >= n) {
    throw std::invalid_argument("apply_local_operator: qubit index out of range");
  }
  const std::size_t stride = std::size_t{1} << (n - 1 - op.qubit);
  Vector amps = state.amplitudes();
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (i & stride) continue;  // handle each (|0>,|1>) pair once
    const auto i0 = static_cast<Eigen::Index>(i);
    const auto i1 = static_cast<Eigen::Index>(i | stride);
    const Complex a0 = amps(i0);
    const Complex a1 = amps(i1);
    amps(i0) = op.matrix(0, 0) * a0 + op.matrix(0, 1) * a1;
    amps(i1) = op.matrix(1, 0) * a0 + op.matrix(1, 1) * a1;
  }
  return StateVector(n, std::move(amps));
}

PbsFusionResult pbs_fusion(const StateVector& state, std::pair<int, int> idler_pair) {
  const int n = state.num_qubits();
  const auto [first, second] = idler_pair;
  if (first < 0 || first >= n || second < 0 || second >= n) {
    throw std::invalid_argument("pbs_fusion: idler index out of range");
  }
  if (first == second) {
    throw std::invalid_argument("pbs_fusion: idler indices must be distinct");
  }
  Vector kept = state.amplitudes();
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (qubit_bit(i, first, n) != qubit_bit(i, second, n)) {
      kept(static_cast<Eigen::Index>(i)) = 0.0;
    }
  }
  const double probability = kept.squaredNorm();
  if (probability <= kNormTol) {
    throw std::runtime_error(
        "pbs_fusion: post-selection annihilates state (probability 0)");
  }
  kept /= std::sqrt(probability);
  return PbsFusionResult{StateVector(n, std::move(kept)), probability};
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  const std::size_t dim_b = b.dim();
  Vector amps(static_cast<Eigen::Index>(a.dim() * dim_b));
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < dim_b; ++j) {
      amps(static_cast<Eigen::Index>(i * dim_b + j)) =
          a.amplitude(i) * b.amplitude(j);
    }
  }
  return StateVector(a.num_qubits() + b.num_qubits(), std::move(amps));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const auto dim_a = static_cast<Eigen::Index>(a.dim());
  const auto dim_b = static_cast<Eigen::Index>(b.dim());
  Matrix out(dim_a * dim_b, dim_a * dim_b);
  for (Eigen::Index i = 0; i < dim_a; ++i) {
    for (Eigen::Index j = 0; j < dim_a; ++j) {
      out.block(i * dim_b, j * dim_b, dim_b, dim_b) =
          a.entries()(i, j) * b.entries();
    }
  }
  return DensityMatrix(a.num_qubits() + b.num_qubits(), std::move(out));
}

DensityMatrix pure_to_density(const StateVector& psi) {
  Matrix rho = psi.amplitudes() * psi.amplitudes().adjoint();
  return DensityMatrix(psi.num_qubits(), std::move(rho));
}

double fidelity_pure_target(const DensityMatrix& rho, const StateVector& psi) {
  if (rho.dim() != psi.dim()) {
    throw std::invalid_argument("fidelity_pure_target: dimension mismatch");
  }
  const double value =
      (psi.amplitudes().adjoint() * rho.entries() * psi.amplitudes())(0).real();
  if (value < -1e-10 || value > 1.0 + 1e-10) {
    throw std::runtime_error("fidelity outside [0, 1] beyond tolerance");
  }
  return std::clamp(value, 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> rho_eig(rho.entries());
  const auto clamped = rho_eig.eigenvalues().cwiseMax(0.0);
  const Matrix sqrt_rho = rho_eig.eigenvectors() *
                          clamped.cwiseSqrt().asDiagonal() *
                          rho_eig.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> inner(sqrt_rho * sigma.entries() * sqrt_rho,
                                              Eigen::EigenvaluesOnly);
  // Eigenvalues that are zero up to round-off must not leak through the
  // square root (sqrt(1e-15) would already cost 3e-8 per mode).
  const Eigen::VectorXd values = inner.eigenvalues();
  const double cutoff = values.cwiseAbs().maxCoeff() * 1e-13;
  double root_sum = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) > cutoff) root_sum += std::sqrt(values(i));
  }
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

}  // namespace pghz
