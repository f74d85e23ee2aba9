#include "pghz/experiment.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "pghz/parallel.hpp"
#include "pghz/random.hpp"

namespace pghz {

namespace {

constexpr int kParties = 4;
constexpr int kSettings = 16;

void check_parameter(const NoiseModel& model) {
  if (!(model.parameter >= 0.0 && model.parameter <= 1.0)) {
    throw std::invalid_argument("noise parameter must lie in [0, 1]");
  }
}

// rho -> (1-p) rho + p (I/2 tensor tr_q rho), identity re-inserted at qubit q.
Matrix depolarize_qubit(const Matrix& rho, int qubit, int num_qubits, double p) {
  const auto dim = static_cast<std::size_t>(rho.rows());
  const std::size_t mask = std::size_t{1} << (num_qubits - 1 - qubit);
  Matrix out = (1.0 - p) * rho;
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if ((r & mask) != (c & mask)) continue;
      const std::size_t r0 = r & ~mask;
      const std::size_t c0 = c & ~mask;
      const Complex traced = rho(static_cast<Eigen::Index>(r0),
                                 static_cast<Eigen::Index>(c0)) +
                             rho(static_cast<Eigen::Index>(r0 | mask),
                                 static_cast<Eigen::Index>(c0 | mask));
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
          0.5 * p * traced;
    }
  }
  return out;
}

double s_partial_derivative(const CorrelationTable& table, std::size_t k) {
  // dS/dE_k with each |.| term's sign frozen at the point estimate.
  double derivative = 0.0;
  for (std::size_t s = 0; s < kSettings; ++s) {
    double inner = 0.0;
    for (std::size_t kk = 0; kk < kSettings; ++kk) {
      const double f =
          (std::popcount(s & kk) % 2 == 0) ? 1.0 : -1.0;
      inner += f * table.at(SettingVector::from_index(kParties, kk));
    }
    if (inner == 0.0) continue;
    const double f_k = (std::popcount(s & k) % 2 == 0) ? 1.0 : -1.0;
    derivative += (inner > 0.0 ? f_k : -f_k);
  }
  return derivative / static_cast<double>(kSettings);
}

std::vector<std::uint64_t> expected_counts(const std::vector<double>& probs,
                                           double mean_total) {
  std::vector<std::uint64_t> counts(probs.size(), 0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    counts[i] = static_cast<std::uint64_t>(std::llround(mean_total * probs[i]));
  }
  return counts;
}

CountsRecord sample_record(const DensityMatrix& rho, const BasisVector& bases,
                           const ExperimentConfig& config, RandomStream rng) {
  const std::vector<double> probs = outcome_probabilities(rho, bases);
  CountsRecord record;
  record.bases = bases;
  record.duration_s = config.duration_s;
  record.seed = rng.seed();
  const double mean_total = config.fourfold_rate_hz * config.duration_s;
  if (config.sampled) {
    const std::uint64_t total = rng.poisson(mean_total);
    if (total == 0) {
      throw std::runtime_error("no counts accumulated for a measurement setting");
    }
    record.counts = rng.sample_counts(total, probs);
    record.rate_hz = static_cast<double>(total) / config.duration_s;
  } else {
    record.counts = expected_counts(probs, mean_total);
    record.rate_hz = config.fourfold_rate_hz;
  }
  return record;
}

}  // namespace

DensityMatrix apply_noise(const DensityMatrix& rho, const NoiseModel& model) {
  switch (model.kind) {
    case NoiseKind::kNone:
      return rho;
    case NoiseKind::kWhite: {
      check_parameter(model);
      const double p = model.parameter;
      const auto dim = static_cast<Eigen::Index>(rho.dim());
      const Matrix mixed =
          p * rho.entries() +
          ((1.0 - p) / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
      return DensityMatrix(rho.num_qubits(), mixed);
    }
    case NoiseKind::kDephasing: {
      check_parameter(model);
      Matrix damped = rho.entries();
      const Eigen::Index last = damped.rows() - 1;
      damped(0, last) *= model.parameter;
      damped(last, 0) *= model.parameter;
      return DensityMatrix(rho.num_qubits(), damped);
    }
    case NoiseKind::kDepolarizingLocal: {
      check_parameter(model);
      Matrix current = rho.entries();
      for (int q = 0; q < rho.num_qubits(); ++q) {
        current = depolarize_qubit(current, q, rho.num_qubits(), model.parameter);
      }
      return DensityMatrix(rho.num_qubits(), current);
    }
  }
  throw std::invalid_argument("unknown noise kind");
}

void validate_config(const ExperimentConfig& config) {
  if (!std::isfinite(config.theta)) {
    throw std::invalid_argument("theta must be finite");
  }
  if (!(config.fourfold_rate_hz > 0.0) || !std::isfinite(config.fourfold_rate_hz)) {
    throw std::invalid_argument("fourfold_rate_hz must be positive");
  }
  if (!(config.duration_s > 0.0) || !std::isfinite(config.duration_s)) {
    throw std::invalid_argument("duration_s must be positive");
  }
  if (!(config.coincidence_window_ns >= 0.0) ||
      !std::isfinite(config.coincidence_window_ns)) {
    throw std::invalid_argument("coincidence_window_ns must be non-negative");
  }
  if (config.noise.kind != NoiseKind::kNone) check_parameter(config.noise);
}

BellRunResult run_bell_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const DensityMatrix rho =
      apply_noise(pure_to_density(phase_ghz(kParties, config.theta)), config.noise);

  BellRunResult result;
  result.estimates.resize(kSettings);
  result.records.resize(kSettings);
  const RandomStream root(config.seed);

  parallel_for(kSettings, [&](std::size_t k) {
    const SettingVector setting = SettingVector::from_index(kParties, k);
    CountsRecord record =
        sample_record(rho, to_bases(setting), config, root.substream(k));
    if (config.sampled) {
      result.estimates[k] = correlation_from_counts(record);
    } else {
      result.estimates[k] =
          CorrelationEstimate{correlation_from_state(rho, setting), 0.0};
    }
    result.records[k] = std::move(record);
  });

  for (std::size_t k = 0; k < kSettings; ++k) {
    result.table.set(SettingVector::from_index(kParties, k), result.estimates[k].e);
  }
  result.s = gbi_s_parameter(result.table);

  double variance = 0.0;
  for (std::size_t k = 0; k < kSettings; ++k) {
    const double d = s_partial_derivative(result.table, k);
    variance += d * d * result.estimates[k].sigma * result.estimates[k].sigma;
  }
  result.sigma_s = std::sqrt(variance);
  return result;
}

double significance(double value, double sigma, double classical_bound) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("sigma must be positive");
  }
  return (value - classical_bound) / sigma;
}

double witness_significance(double value, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("sigma must be positive");
  }
  return std::abs(value) / sigma;
}

std::vector<ScanPoint> theta_scan(const ExperimentConfig& config,
                                  const std::vector<double>& theta_grid) {
  if (theta_grid.empty()) {
    throw std::invalid_argument("theta grid is empty");
  }
  validate_config(config);
  const RandomStream root(config.seed);
  std::vector<ScanPoint> points;
  points.reserve(theta_grid.size());
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    ExperimentConfig point_config = config;
    point_config.theta = theta_grid[i];
    point_config.seed = root.substream(i).seed();
    const BellRunResult run = run_bell_experiment(point_config);
    points.push_back(ScanPoint{theta_grid[i], run.s, run.sigma_s,
                               quantum_prediction(theta_grid[i])});
  }
  return points;
}

WitnessRunResult run_witness_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const std::vector<WitnessTerm> terms = witness_correlation_terms(config.theta);
  const DensityMatrix rho =
      apply_noise(pure_to_density(phase_ghz(kParties, config.theta)), config.noise);
  const RandomStream root(config.seed);

  WitnessRunResult result;
  result.records.resize(terms.size());
  parallel_for(terms.size(), [&](std::size_t i) {
    const SettingVector& setting = terms[i].setting;
    result.records[i] = sample_record(rho, to_bases(setting), config,
                                      root.substream(setting.index()));
  });
  const BasisVector hv(kParties, PolarizationBasis::HV);
  result.hv_record = sample_record(rho, hv, config, root.substream(kSettings));

  if (config.sampled) {
    result.estimate = witness_from_counts(result.records, result.hv_record,
                                          config.theta);
  } else {
    CorrelationTable table(kParties);
    for (const WitnessTerm& term : terms) {
      table.set(term.setting, correlation_from_state(rho, term.setting));
    }
    const std::vector<double> populations = outcome_probabilities(rho, hv);
    result.estimate.theta = config.theta;
    result.estimate.value = witness_from_settings(
        table, populations.front(), populations.back(), config.theta);
    result.estimate.sigma = 0.0;
    result.estimate.significance = std::numeric_limits<double>::infinity();
    result.estimate.method = "decomposed";
  }
  return result;
}

}  // namespace pghz
