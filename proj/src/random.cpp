#include "pghz/random.hpp"

#include <cmath>
#include <stdexcept>

#include <algorithm>

namespace pghz {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed) {
  // Expand the user seed through splitmix64 so that low-entropy seeds
  // (0, 1, 2, ...) still start the engine in well-separated states.
  std::uint64_t s = seed;
  engine_.seed(splitmix64(s));
}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * 3.141592653589793238462643383279502884 * u2;
  cached_normal_ = r * std::sin(phi);
  has_cached_normal_ = true;
  return r * std::cos(phi);
}

std::uint64_t RandomStream::poisson(double mean) {
  if (mean < 0.0 || !std::isfinite(mean)) {
    throw std::invalid_argument("poisson: mean must be finite and non-negative");
  }
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    // Knuth: multiply uniforms until the product drops below e^-mean.
    const double limit = std::exp(-mean);
    double product = 1.0;
    std::uint64_t k = 0;
    for (;;) {
      product *= uniform();
      if (product <= limit) return k;
      ++k;
    }
  }
  // PTRS transformed rejection (Hormann 1993), exact for mean >= 10.
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) {
      return static_cast<std::uint64_t>(k);
    }
    if (k < 0.0 || (us < 0.013 && v > us)) {
      continue;
    }
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        k * loglam - mean - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

std::vector<std::uint64_t> RandomStream::sample_counts(
    std::uint64_t n, std::span<const double> probabilities) {
  std::vector<double> cumulative(probabilities.size());
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    total += std::max(probabilities[i], 0.0);
    cumulative[i] = total;
  }
  if (total <= 0.0) {
    throw std::invalid_argument("sample_counts: probabilities sum to zero");
  }
  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  for (std::uint64_t draw = 0; draw < n; ++draw) {
    const double u = uniform() * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t idx =
        std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                              counts.size() - 1);
    ++counts[idx];
  }
  return counts;
}

RandomStream RandomStream::substream(std::uint64_t index) const {
  std::uint64_t s = seed_ ^ (0xD1B54A32D192ED03ULL * (index + 1));
  return RandomStream(splitmix64(s));
}

}  // namespace pghz
