#include "pghz/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pghz/measurement.hpp"
#include "pghz/parallel.hpp"
#include "pghz/random.hpp"

namespace pghz {

namespace {

constexpr int kQubits = 4;
constexpr int kDim = 16;
constexpr int kSettings = 256;
constexpr char kAlphabet[4] = {'H', 'V', 'D', 'R'};

Eigen::Vector2cd label_ket(char label) {
  switch (label) {
    case 'H':
      return basis_ket(PolarizationBasis::HV, 0);
    case 'V':
      return basis_ket(PolarizationBasis::HV, 1);
    case 'D':
      return basis_ket(PolarizationBasis::DA, 0);
    case 'R':
      return basis_ket(PolarizationBasis::RL, 0);
    default:
      throw std::invalid_argument("tomography label must be one of H, V, D, R");
  }
}

Vector product_ket(const std::string& labels) {
  if (labels.size() != kQubits) {
    throw std::invalid_argument("tomography labels must have one character per qubit");
  }
  Vector ket = Vector::Ones(1);
  for (char label : labels) {
    const Eigen::Vector2cd single = label_ket(label);
    Vector next(ket.size() * 2);
    for (Eigen::Index a = 0; a < ket.size(); ++a) {
      next(2 * a) = ket(a) * single(0);
      next(2 * a + 1) = ket(a) * single(1);
    }
    ket = std::move(next);
  }
  return ket;
}

double ket_probability(const Vector& ket, const DensityMatrix& rho) {
  const Complex value = ket.adjoint() * rho.entries() * ket;
  return std::max(value.real(), 0.0);
}

// Hermitian matrix from the real parameter layout used by
// tomography_design_matrix: diagonal first, then Re/Im of the strict upper
// triangle in row-major order.
Matrix hermitian_from_parameters(const Eigen::VectorXd& x) {
  Matrix y = Matrix::Zero(kDim, kDim);
  for (int a = 0; a < kDim; ++a) y(a, a) = x(a);
  int index = kDim;
  for (int a = 0; a < kDim; ++a) {
    for (int b = a + 1; b < kDim; ++b) {
      const Complex value(x(index), x(index + 1));
      y(a, b) = value;
      y(b, a) = std::conj(value);
      index += 2;
    }
  }
  return y;
}

}  // namespace

std::vector<TomographyProjector> make_tomography_projectors() {
  std::vector<TomographyProjector> projectors;
  projectors.reserve(kSettings);
  for (int index = 0; index < kSettings; ++index) {
    std::string labels(kQubits, 'H');
    for (int q = 0; q < kQubits; ++q) {
      labels[q] = kAlphabet[(index >> (2 * (kQubits - 1 - q))) & 3];
    }
    projectors.push_back(TomographyProjector{labels, product_ket(labels)});
  }
  return projectors;
}

double projector_probability(const TomographyProjector& projector,
                             const DensityMatrix& rho) {
  return ket_probability(projector.ket, rho);
}

Eigen::MatrixXd tomography_design_matrix(
    const std::vector<TomographyProjector>& projectors) {
  const auto rows = static_cast<Eigen::Index>(projectors.size());
  Eigen::MatrixXd design(rows, kSettings);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Matrix p = projectors[i].ket * projectors[i].ket.adjoint();
    for (int a = 0; a < kDim; ++a) design(i, a) = p(a, a).real();
    int index = kDim;
    for (int a = 0; a < kDim; ++a) {
      for (int b = a + 1; b < kDim; ++b) {
        design(i, index) = 2.0 * p(a, b).real();
        design(i, index + 1) = 2.0 * p(a, b).imag();
        index += 2;
      }
    }
  }
  return design;
}

TomographySet simulate_tomography_counts(const DensityMatrix& rho,
                                         double shots_per_setting,
                                         std::uint64_t seed) {
  if (!(shots_per_setting > 0.0) || !std::isfinite(shots_per_setting)) {
    throw std::invalid_argument("shots_per_setting must be positive and finite");
  }
  RandomStream rng(seed);
  TomographySet set;
  set.reserve(kSettings);
  for (const TomographyProjector& projector : make_tomography_projectors()) {
    const double mean = shots_per_setting * projector_probability(projector, rho);
    set.push_back(TomographyRecord{projector.labels, rng.poisson(mean), 1.0});
  }
  return set;
}

TomographySet exact_tomography_counts(const DensityMatrix& rho, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("scale must be positive and finite");
  }
  TomographySet set;
  set.reserve(kSettings);
  for (const TomographyProjector& projector : make_tomography_projectors()) {
    const double mean = scale * projector_probability(projector, rho);
    set.push_back(TomographyRecord{
        projector.labels, static_cast<std::uint64_t>(std::llround(mean)), 1.0});
  }
  return set;
}

Matrix CholeskyParameters::factor() const {
  if (values.size() != kParamCount) {
    throw std::invalid_argument("Cholesky parameter vector must have 256 entries");
  }
  Matrix t = Matrix::Zero(kDim, kDim);
  for (int j = 0; j < kDim; ++j) t(j, j) = values(j);
  int index = kDim;
  for (int j = 1; j < kDim; ++j) {
    for (int k = 0; k < j; ++k) {
      t(j, k) = Complex(values(index), values(index + 1));
      index += 2;
    }
  }
  return t;
}

DensityMatrix CholeskyParameters::density() const {
  const Matrix t = factor();
  const double norm = t.squaredNorm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("degenerate Cholesky factor");
  }
  const Matrix rho = (t.adjoint() * t) / norm;
  return DensityMatrix(kQubits, rho);
}

CholeskyParameters cholesky_parameters(const DensityMatrix& rho) {
  // rho = T^dag T needs the "UL" Cholesky variant; obtain it by ordinary
  // LL^dag factorization of the index-reversed matrix.
  Matrix t;
  double epsilon = 1e-9;
  while (true) {
    const Matrix mixed = (1.0 - epsilon) * rho.entries() +
                         (epsilon / kDim) * Matrix::Identity(kDim, kDim);
    const Matrix reversed = mixed.reverse();
    Eigen::LLT<Matrix> llt(reversed);
    if (llt.info() == Eigen::Success) {
      const Matrix upper = Matrix(llt.matrixL()).reverse();
      t = upper.adjoint();
      break;
    }
    epsilon *= 100.0;
    if (epsilon > 1e-2) {
      throw std::runtime_error("Cholesky factorization of density matrix failed");
    }
  }

  CholeskyParameters params;
  params.values.resize(CholeskyParameters::kParamCount);
  for (int j = 0; j < kDim; ++j) params.values(j) = t(j, j).real();
  int index = kDim;
  for (int j = 1; j < kDim; ++j) {
    for (int k = 0; k < j; ++k) {
      params.values(index) = t(j, k).real();
      params.values(index + 1) = t(j, k).imag();
      index += 2;
    }
  }
  return params;
}

PoissonLikelihood::PoissonLikelihood(const TomographySet& set) : set_(set) {
  if (set_.empty()) {
    throw std::invalid_argument("tomography set is empty");
  }
  const auto n = static_cast<Eigen::Index>(set_.size());
  kets_.resize(kDim, n);
  counts_.resize(n);
  weights_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const TomographyRecord& record = set_[static_cast<std::size_t>(i)];
    if (!(record.duration_s > 0.0)) {
      throw std::invalid_argument("tomography record duration must be positive");
    }
    kets_.col(i) = product_ket(record.labels);
    counts_(i) = static_cast<double>(record.counts);
    weights_(i) = record.duration_s;
  }
  total_counts_ = counts_.sum();
  if (!(total_counts_ > 0.0)) {
    throw std::invalid_argument("tomography counts are all zero");
  }
}

double PoissonLikelihood::value(const CholeskyParameters& params) const {
  const Matrix t = params.factor();
  const double norm = t.squaredNorm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    return -std::numeric_limits<double>::infinity();
  }
  const Matrix mapped = t * kets_;
  const Eigen::VectorXd probs =
      mapped.colwise().squaredNorm().real().transpose() / norm;
  const double exposure = weights_.dot(probs);
  if (!(exposure > 0.0)) {
    return -std::numeric_limits<double>::infinity();
  }
  const double flux = total_counts_ / exposure;
  double ll = -total_counts_;  // sum of means equals total counts at the
                               // profiled flux
  for (Eigen::Index i = 0; i < counts_.size(); ++i) {
    if (counts_(i) == 0.0) continue;
    const double mean = flux * weights_(i) * probs(i);
    if (!(mean > 0.0)) {
      return -std::numeric_limits<double>::infinity();
    }
    ll += counts_(i) * std::log(mean);
  }
  return std::isfinite(ll) ? ll
                           : -std::numeric_limits<double>::infinity();
}

double PoissonLikelihood::value_and_gradient(const CholeskyParameters& params,
                                             Eigen::VectorXd& gradient) const {
  gradient = Eigen::VectorXd::Zero(CholeskyParameters::kParamCount);
  const double ll = value(params);
  if (!std::isfinite(ll)) return ll;

  const Matrix t = params.factor();
  const double norm = t.squaredNorm();
  const Matrix mapped = t * kets_;
  const Eigen::VectorXd probs =
      mapped.colwise().squaredNorm().real().transpose() / norm;
  const double flux = total_counts_ / weights_.dot(probs);

  // d(ll) = tr(R dA) / norm with A = T^dag T; the trace-normalization part
  // cancels exactly at the profiled flux.
  Eigen::VectorXd residual(counts_.size());
  for (Eigen::Index i = 0; i < counts_.size(); ++i) {
    const double p = std::max(probs(i), 1e-300);
    residual(i) = counts_(i) / p - flux * weights_(i);
  }
  Matrix r = kets_ * residual.asDiagonal() * kets_.adjoint();
  r = 0.5 * (r + Matrix(r.adjoint()));
  const Matrix g = (2.0 / norm) * (t * r);

  for (int j = 0; j < kDim; ++j) gradient(j) = g(j, j).real();
  int index = kDim;
  for (int j = 1; j < kDim; ++j) {
    for (int k = 0; k < j; ++k) {
      gradient(index) = g(j, k).real();
      gradient(index + 1) = g(j, k).imag();
      index += 2;
    }
  }
  return ll;
}

namespace {

// Linear-inversion estimate projected onto the physical set, used to start
// the likelihood ascent close to the optimum.
DensityMatrix linear_inversion_start(const TomographySet& set) {
  std::vector<TomographyProjector> projectors;
  projectors.reserve(set.size());
  Eigen::VectorXd rates(static_cast<Eigen::Index>(set.size()));
  for (std::size_t i = 0; i < set.size(); ++i) {
    projectors.push_back(TomographyProjector{set[i].labels, product_ket(set[i].labels)});
    rates(static_cast<Eigen::Index>(i)) =
        static_cast<double>(set[i].counts) / set[i].duration_s;
  }
  const Eigen::MatrixXd design = tomography_design_matrix(projectors);
  const Eigen::VectorXd solution = design.colPivHouseholderQr().solve(rates);
  const Matrix y = hermitian_from_parameters(solution);

  Eigen::SelfAdjointEigenSolver<Matrix> solver(y);
  Eigen::VectorXd eigenvalues = solver.eigenvalues().cwiseMax(0.0);
  const double total = eigenvalues.sum();
  Matrix rho;
  if (total > 0.0) {
    eigenvalues /= total;
    rho = solver.eigenvectors() * eigenvalues.asDiagonal() *
          solver.eigenvectors().adjoint();
  } else {
    rho = Matrix::Identity(kDim, kDim) / kDim;
  }
  // Small identity admixture keeps every projector probability strictly
  // positive so the first likelihood evaluation is finite.
  const double epsilon = 1e-6;
  rho = (1.0 - epsilon) * rho + (epsilon / kDim) * Matrix::Identity(kDim, kDim);
  rho = 0.5 * (rho + Matrix(rho.adjoint()));
  return DensityMatrix(kQubits, rho);
}

}  // namespace

MleResult mle_reconstruct(const TomographySet& set, const MleOptions& options) {
  if (options.max_iterations <= 0) {
    throw std::invalid_argument("max_iterations must be positive");
  }
  const PoissonLikelihood likelihood(set);

  CholeskyParameters params = cholesky_parameters(linear_inversion_start(set));
  Eigen::VectorXd gradient;
  double ll = likelihood.value(params);
  if (!std::isfinite(ll)) {
    throw std::runtime_error("log-likelihood is not finite at the starting point");
  }

  std::vector<double> history;
  history.reserve(static_cast<std::size_t>(options.max_iterations) + 1);
  history.push_back(ll);

  double step = 0.0;
  int iterations = 0;
  for (int it = 0; it < options.max_iterations; ++it) {
    const double current = likelihood.value_and_gradient(params, gradient);
    const double gradient_norm = gradient.norm();
    if (gradient_norm == 0.0) break;
    if (step == 0.0) {
      step = 1e-2 * (params.values.norm() + 1.0) / gradient_norm;
    }

    bool accepted = false;
    double improvement = 0.0;
    while (step > 1e-300) {
      CholeskyParameters trial;
      trial.values = params.values + step * gradient;
      const double ll_trial = likelihood.value(trial);
      if (std::isfinite(ll_trial) && ll_trial >= current) {
        improvement = ll_trial - current;
        params = std::move(trial);
        ll = ll_trial;
        history.push_back(ll);
        step *= 1.2;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++iterations;
    if (!accepted) break;
    if (improvement <= options.rel_tol * (std::abs(ll) + 1.0)) break;
  }

  return MleResult{params.density(), std::move(params), ll, iterations,
                   std::move(history)};
}

FidelityEstimate fidelity_with_error(const TomographySet& set,
                                     const StateVector& target, int n_bootstrap,
                                     std::uint64_t seed,
                                     const MleOptions& options) {
  if (n_bootstrap < 2) {
    throw std::invalid_argument("n_bootstrap must be at least 2");
  }

  const MleResult point = mle_reconstruct(set, options);
  FidelityEstimate estimate;
  estimate.value = fidelity_pure_target(point.rho, target);

  const auto resamples = static_cast<std::size_t>(n_bootstrap);
  std::vector<double> fidelities(resamples, 0.0);
  const RandomStream root(seed);
  parallel_for(resamples, [&](std::size_t b) {
    RandomStream rng = root.substream(b);
    TomographySet resampled = set;
    for (TomographyRecord& record : resampled) {
      record.counts = rng.poisson(static_cast<double>(record.counts));
    }
    const MleResult fit = mle_reconstruct(resampled, options);
    fidelities[b] = fidelity_pure_target(fit.rho, target);
  });

  double mean = 0.0;
  for (double f : fidelities) mean += f;
  mean /= static_cast<double>(resamples);
  double variance = 0.0;
  for (double f : fidelities) variance += (f - mean) * (f - mean);
  variance /= static_cast<double>(resamples - 1);
  estimate.sigma = std::sqrt(variance);
  return estimate;
}

}  // namespace pghz
