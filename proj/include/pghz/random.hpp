// Seeded random streams with fully specified sampling algorithms, so that a
// fixed seed yields byte-identical results on every platform.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <random>

namespace pghz {

std::uint64_t splitmix64(std::uint64_t& state);

// A deterministic random stream. Uniform doubles are produced from the top 53
// bits of mt19937_64 output; Poisson and categorical sampling are implemented
// here rather than with std:: distributions, whose algorithms are
// implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  // Uniform on [0, 1).
  double uniform();

  // Standard normal via Box-Muller (second deviate cached).
  double normal();

  // Poisson deviate: Knuth multiplication below mean 10, Hormann's PTRS
  // transformed rejection above.
  std::uint64_t poisson(double mean);

  // Draws n categorical samples by inverse CDF and returns per-category
  // counts. Probabilities may carry tiny negative floating-point noise; they
  // are clamped at zero.
  std::vector<std::uint64_t> sample_counts(std::uint64_t n,
                                           std::span<const double> probabilities);

  // Deterministic child stream; distinct indices give independent streams.
  RandomStream substream(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace pghz
