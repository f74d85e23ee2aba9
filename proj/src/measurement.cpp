#include "pghz/measurement.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pghz {

namespace {

const Complex kI(0.0, 1.0);

Eigen::Matrix2cd pauli_for_setting(int k) {
  Eigen::Matrix2cd m;
  if (k == 1) {
    m << 0.0, 1.0, 1.0, 0.0;  // sigma_x
  } else {
    m << 0.0, -kI, kI, 0.0;  // sigma_y
  }
  return m;
}

// Product ket for one outcome bit-pattern of an n-party basis choice.
Vector outcome_ket(const BasisVector& bases, std::size_t outcome) {
  const int n = static_cast<int>(bases.size());
  Vector ket = Vector::Ones(1);
  for (int party = 0; party < n; ++party) {
    const int bit = static_cast<int>((outcome >> (n - 1 - party)) & 1u);
    const Eigen::Vector2cd single = basis_ket(bases[static_cast<std::size_t>(party)], bit);
    Vector next(ket.size() * 2);
    for (Eigen::Index i = 0; i < ket.size(); ++i) {
      next(2 * i) = ket(i) * single(0);
      next(2 * i + 1) = ket(i) * single(1);
    }
    ket.swap(next);
  }
  return ket;
}

int outcome_parity(std::size_t outcome) {
  return (std::popcount(outcome) & 1) ? -1 : 1;
}

}  // namespace

BasisProjectors basis_projectors(PolarizationBasis basis) {
  const Eigen::Vector2cd plus = basis_ket(basis, 0);
  const Eigen::Vector2cd minus = basis_ket(basis, 1);
  return BasisProjectors{plus * plus.adjoint(), minus * minus.adjoint()};
}

Eigen::Vector2cd basis_ket(PolarizationBasis basis, int outcome_bit) {
  if (outcome_bit != 0 && outcome_bit != 1) {
    throw std::invalid_argument("basis_ket: outcome bit must be 0 or 1");
  }
  Eigen::Vector2cd ket;
  switch (basis) {
    case PolarizationBasis::HV:
      ket = outcome_bit == 0 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
      break;
    case PolarizationBasis::DA:
      // D = (H+V)/sqrt(2), A = (H-V)/sqrt(2)
      ket = outcome_bit == 0 ? Eigen::Vector2cd(kInvSqrt2, kInvSqrt2)
                             : Eigen::Vector2cd(kInvSqrt2, -kInvSqrt2);
      break;
    case PolarizationBasis::RL:
      // R = (H+iV)/sqrt(2), L = (H-iV)/sqrt(2)
      ket = outcome_bit == 0 ? Eigen::Vector2cd(kInvSqrt2, kI * kInvSqrt2)
                             : Eigen::Vector2cd(kInvSqrt2, -kI * kInvSqrt2);
      break;
  }
  return ket;
}

SettingVector::SettingVector(std::vector<int> k) : k_(std::move(k)) {
  if (k_.empty()) {
    throw std::invalid_argument("SettingVector must not be empty");
  }
  for (const int kj : k_) {
    if (kj != 1 && kj != 2) {
      throw std::invalid_argument("SettingVector entries must be 1 or 2, got " +
                                  std::to_string(kj));
    }
  }
}

SettingVector SettingVector::from_index(int num_parties, std::size_t index) {
  if (num_parties < 1) {
    throw std::invalid_argument("SettingVector: need at least one party");
  }
  if (index >= (std::size_t{1} << num_parties)) {
    throw std::invalid_argument("SettingVector: index out of range");
  }
  std::vector<int> k(static_cast<std::size_t>(num_parties));
  for (int party = 0; party < num_parties; ++party) {
    k[static_cast<std::size_t>(party)] =
        ((index >> (num_parties - 1 - party)) & 1u) ? 2 : 1;
  }
  return SettingVector(std::move(k));
}

std::size_t SettingVector::index() const {
  std::size_t idx = 0;
  for (const int kj : k_) {
    idx = (idx << 1) | static_cast<std::size_t>(kj - 1);
  }
  return idx;
}

int SettingVector::count_circular() const {
  int count = 0;
  for (const int kj : k_) count += (kj == 2);
  return count;
}

BasisVector to_bases(const SettingVector& setting) {
  BasisVector bases;
  bases.reserve(static_cast<std::size_t>(setting.size()));
  for (const int kj : setting.entries()) {
    bases.push_back(kj == 1 ? PolarizationBasis::DA : PolarizationBasis::RL);
  }
  return bases;
}

std::uint64_t CountsRecord::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

CorrelationTable::CorrelationTable(int num_parties)
    : num_parties_(num_parties),
      values_(std::size_t{1} << num_parties) {
  if (num_parties < 1 || num_parties > kMaxQubits) {
    throw std::invalid_argument("CorrelationTable: invalid party count");
  }
}

void CorrelationTable::set(const SettingVector& setting, double e) {
  if (setting.size() != num_parties_) {
    throw std::invalid_argument("CorrelationTable: setting length mismatch");
  }
  if (e < -1.0 - kProbTol || e > 1.0 + kProbTol) {
    throw std::invalid_argument("CorrelationTable: E outside [-1, 1]");
  }
  values_[setting.index()] = e;
}

double CorrelationTable::at(const SettingVector& setting) const {
  if (setting.size() != num_parties_) {
    throw std::invalid_argument("CorrelationTable: setting length mismatch");
  }
  const auto& value = values_[setting.index()];
  if (!value) {
    throw std::out_of_range("CorrelationTable: setting not present");
  }
  return *value;
}

bool CorrelationTable::contains(const SettingVector& setting) const {
  return setting.size() == num_parties_ && values_[setting.index()].has_value();
}

bool CorrelationTable::complete() const {
  for (const auto& value : values_) {
    if (!value) return false;
  }
  return true;
}

std::size_t CorrelationTable::size() const {
  std::size_t count = 0;
  for (const auto& value : values_) count += value.has_value();
  return count;
}

std::vector<double> outcome_probabilities(const DensityMatrix& rho,
                                          const BasisVector& bases) {
  const int n = rho.num_qubits();
  if (static_cast<int>(bases.size()) != n) {
    throw std::invalid_argument("outcome_probabilities: basis count mismatch");
  }
  const std::size_t dim = rho.dim();
  std::vector<double> probabilities(dim, 0.0);
  double sum = 0.0;
  for (std::size_t outcome = 0; outcome < dim; ++outcome) {
    const Vector ket = outcome_ket(bases, outcome);
    const double p = (ket.adjoint() * rho.entries() * ket)(0).real();
    if (p < -kProbTol) {
      throw std::runtime_error("outcome_probabilities: negative probability " +
                               std::to_string(p));
    }
    probabilities[outcome] = std::max(p, 0.0);
    sum += probabilities[outcome];
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw std::runtime_error("outcome_probabilities: probabilities sum to " +
                             std::to_string(sum));
  }
  return probabilities;
}

std::vector<double> outcome_probabilities(const DensityMatrix& rho,
                                          const SettingVector& setting) {
  return outcome_probabilities(rho, to_bases(setting));
}

double correlation_from_state(const DensityMatrix& rho, const SettingVector& setting) {
  const auto probabilities = outcome_probabilities(rho, setting);
  double e = 0.0;
  for (std::size_t outcome = 0; outcome < probabilities.size(); ++outcome) {
    e += outcome_parity(outcome) * probabilities[outcome];
  }
  return e;
}

Matrix pauli_tensor(const SettingVector& setting) {
  Matrix op = Matrix::Ones(1, 1);
  for (const int kj : setting.entries()) {
    // Earlier parties stay most significant: op <- kron(op, sigma_{k_j}).
    const Eigen::Matrix2cd single = pauli_for_setting(kj);
    Matrix next(op.rows() * 2, op.cols() * 2);
    for (Eigen::Index i = 0; i < op.rows(); ++i) {
      for (Eigen::Index j = 0; j < op.cols(); ++j) {
        next.block(2 * i, 2 * j, 2, 2) = op(i, j) * single;
      }
    }
    op.swap(next);
  }
  return op;
}

double correlation_from_pauli_trace(const DensityMatrix& rho,
                                    const SettingVector& setting) {
  if (setting.size() != rho.num_qubits()) {
    throw std::invalid_argument("correlation_from_pauli_trace: size mismatch");
  }
  return (rho.entries() * pauli_tensor(setting)).trace().real();
}

CorrelationEstimate correlation_from_counts(const CountsRecord& record) {
  for (const PolarizationBasis basis : record.bases) {
    if (basis == PolarizationBasis::HV) {
      throw std::invalid_argument(
          "correlation_from_counts: record is not a D/A-R/L setting");
    }
  }
  const std::size_t expected = std::size_t{1} << record.bases.size();
  if (record.counts.size() != expected) {
    throw std::invalid_argument("correlation_from_counts: counts length mismatch");
  }
  const std::uint64_t total = record.total();
  if (total == 0) {
    throw std::runtime_error("correlation_from_counts: zero total counts");
  }
  double parity_sum = 0.0;
  for (std::size_t outcome = 0; outcome < record.counts.size(); ++outcome) {
    parity_sum += outcome_parity(outcome) *
                  static_cast<double>(record.counts[outcome]);
  }
  CorrelationEstimate estimate;
  estimate.e = parity_sum / static_cast<double>(total);
  estimate.sigma = std::sqrt(std::max(1.0 - estimate.e * estimate.e, 0.0) /
                             static_cast<double>(total));
  return estimate;
}

CorrelationTable full_correlation_table(const DensityMatrix& rho) {
  const int n = rho.num_qubits();
  CorrelationTable table(n);
  for (std::size_t index = 0; index < (std::size_t{1} << n); ++index) {
    const SettingVector setting = SettingVector::from_index(n, index);
    table.set(setting, correlation_from_state(rho, setting));
  }
  return table;
}

}  // namespace pghz
