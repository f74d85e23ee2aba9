// Four-qubit polarization state tomography: the 256-setting product-projector
// protocol, a Poisson-likelihood maximum-likelihood reconstruction over a
// Cholesky parameterization, and parametric-bootstrap fidelity errors.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pghz/state.hpp"

namespace pghz {

// Rank-1 product projector labelled per qubit from the alphabet {H, V, D, R}.
struct TomographyProjector {
  std::string labels;  // 4 characters, first character = qubit 0
  Vector ket;          // 16-dimensional product ket; projector = ket ket^dag
};

// All 4^4 = 256 projectors in lexicographic order with H < V < D < R.
std::vector<TomographyProjector> make_tomography_projectors();

// Tr(P rho) for a single projector.
double projector_probability(const TomographyProjector& projector,
                             const DensityMatrix& rho);

// 256x256 real map from Hermitian-matrix parameters (16 diagonal entries,
// then Re/Im of the strict upper triangle in row-major order) to projector
// expectation values. Full rank iff the protocol is informationally complete.
Eigen::MatrixXd tomography_design_matrix(
    const std::vector<TomographyProjector>& projectors);

struct TomographyRecord {
  std::string labels;
  std::uint64_t counts = 0;
  double duration_s = 1.0;
};

using TomographySet = std::vector<TomographyRecord>;

// Counts drawn Poisson with mean shots_per_setting * Tr(P rho), one record
// per projector, deterministic under the seed. Requires shots_per_setting > 0.
TomographySet simulate_tomography_counts(const DensityMatrix& rho,
                                         double shots_per_setting,
                                         std::uint64_t seed);

// Noise-free counts round(scale * Tr(P rho)), the infinite-statistics limit.
TomographySet exact_tomography_counts(const DensityMatrix& rho, double scale);

// 256 real parameters defining a lower-triangular complex T with real
// diagonal; the represented state is rho = T^dag T / Tr(T^dag T), which is
// Hermitian, positive semidefinite, and trace-1 for any parameter values.
struct CholeskyParameters {
  static constexpr int kParamCount = 256;

  Eigen::VectorXd values;  // [16 diagonal | Re, Im per strict lower entry]

  Matrix factor() const;  // the 16x16 lower-triangular T
  DensityMatrix density() const;
};

// Inverse map: parameters whose density equals rho up to the slight identity
// admixture used to keep the factorization positive definite.
CholeskyParameters cholesky_parameters(const DensityMatrix& rho);

// Profiled-flux Poisson log-likelihood of a tomography data set. The per
// record mean is mu_i = lambda * duration_i * p_i(T) with the overall flux
// lambda maximized out analytically, so the objective depends on the
// Cholesky parameters alone.
class PoissonLikelihood {
 public:
  explicit PoissonLikelihood(const TomographySet& set);

  double value(const CholeskyParameters& params) const;
  double value_and_gradient(const CholeskyParameters& params,
                            Eigen::VectorXd& gradient) const;

  const TomographySet& data() const { return set_; }

 private:
  TomographySet set_;
  Matrix kets_;  // 16x256, one projector ket per column
  Eigen::VectorXd counts_;
  Eigen::VectorXd weights_;
  double total_counts_ = 0.0;
};

struct MleOptions {
  double rel_tol = 1e-10;
  int max_iterations = 5000;
};

struct MleResult {
  DensityMatrix rho;
  CholeskyParameters params;
  double log_likelihood = 0.0;
  int iterations = 0;
  std::vector<double> ll_history;  // accepted-step values, non-decreasing
};

// Maximum-likelihood reconstruction: linear-inversion warm start followed by
// monotone adaptive-step gradient ascent on the Cholesky parameters.
MleResult mle_reconstruct(const TomographySet& set, const MleOptions& options = {});

struct FidelityEstimate {
  double value = 0.0;
  double sigma = 0.0;
};

// Point fidelity of the reconstruction against a pure target, with the error
// bar taken from n_bootstrap parametric Poisson resamples of the counts, each
// independently reconstructed. Requires n_bootstrap >= 2.
FidelityEstimate fidelity_with_error(const TomographySet& set,
                                     const StateVector& target, int n_bootstrap,
                                     std::uint64_t seed,
                                     const MleOptions& options = {});

}  // namespace pghz
