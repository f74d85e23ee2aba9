#include "pghz/bell.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace pghz {

CorrelationTable DeterministicStrategy::correlation_table() const {
  const int n = static_cast<int>(outcomes.size());
  CorrelationTable table(n);
  for (std::size_t index = 0; index < (std::size_t{1} << n); ++index) {
    const SettingVector setting = SettingVector::from_index(n, index);
    double product = 1.0;
    for (int party = 0; party < n; ++party) {
      product *= outcomes[static_cast<std::size_t>(party)]
                         [static_cast<std::size_t>(setting.k(party) - 1)];
    }
    table.set(setting, product);
  }
  return table;
}

double gbi_s_parameter(const CorrelationTable& table) {
  if (!table.complete()) {
    throw std::invalid_argument("gbi_s_parameter: correlation table is incomplete");
  }
  const int n = table.num_parties();
  const std::size_t count = std::size_t{1} << n;

  std::vector<double> e(count);
  for (std::size_t k = 0; k < count; ++k) {
    e[k] = table.at(SettingVector::from_index(n, k));
  }

  // Encode sign vectors as bit masks with bit j set when s_j = -1; then
  // f(s, k) = (-1)^popcount(s & k) with k's bits marking the k_j = 2 parties.
  double total = 0.0;
  for (std::size_t s = 0; s < count; ++s) {
    double inner = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      inner += (std::popcount(s & k) & 1) ? -e[k] : e[k];
    }
    total += std::abs(inner);
  }
  return total / static_cast<double>(count);
}

double quantum_prediction(double theta) {
  return 2.0 * (std::abs(std::cos(theta)) + std::abs(std::sin(theta)));
}

LhvResult lhv_max(int num_parties) {
  if (num_parties < 1 || num_parties > 6) {
    throw std::invalid_argument(
        "lhv_max: exhaustive enumeration supported for 1 <= n <= 6");
  }
  const std::size_t strategy_count = std::size_t{1} << (2 * num_parties);
  LhvResult best;
  best.max_s = -1.0;
  for (std::size_t code = 0; code < strategy_count; ++code) {
    DeterministicStrategy strategy;
    strategy.outcomes.resize(static_cast<std::size_t>(num_parties));
    for (int party = 0; party < num_parties; ++party) {
      // Two bits per party: bit 0 -> outcome at setting 1, bit 1 -> setting 2.
      const std::size_t bits = (code >> (2 * party)) & 3u;
      strategy.outcomes[static_cast<std::size_t>(party)] = {
          (bits & 1u) ? -1 : 1, (bits & 2u) ? -1 : 1};
    }
    const double s = gbi_s_parameter(strategy.correlation_table());
    if (s > best.max_s) {
      best.max_s = s;
      best.strategy = std::move(strategy);
    }
  }
  return best;
}

GbiResult gbi_from_state(const DensityMatrix& rho) {
  GbiResult result{0.0, full_correlation_table(rho)};
  result.s = gbi_s_parameter(result.table);
  return result;
}

}  // namespace pghz
