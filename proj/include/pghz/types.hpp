// Shared aliases and numeric tolerances for the phase-GHZ simulator.
#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace pghz {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Tolerances fixed by the library contracts.
inline constexpr double kNormTol = 1e-12;  // unit norm of state vectors
inline constexpr double kHermTol = 1e-12;  // elementwise Hermiticity, trace
inline constexpr double kPsdTol = 1e-10;   // eigenvalue floor for density matrices
inline constexpr double kProbTol = 1e-12;  // allowed negative probability slack

// Dense 2^n amplitude storage; everything in this project is n = 4, the cap
// merely keeps accidental inputs from allocating gigabytes.
inline constexpr int kMaxQubits = 10;

}  // namespace pghz
