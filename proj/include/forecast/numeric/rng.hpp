#pragma once

#include <cstdint>
#include <string_view>

#include "forecast/numeric/tensor.hpp"

namespace forecast {

// Counter-based generator: draw n is a SplitMix64 finalizer applied to
// key + n * golden-gamma, so a stream is fully described by (key, counter).
// Not thread-safe; hand each concurrent task its own child().
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits of precision.
  double next_double();
  // Uniform in [lo, hi); throws RangeError if lo >= hi.
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller (consumes two draws).
  double normal(double mean = 0.0, double stddev = 1.0);
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  // Independent stream whose seed is a hash of (this seed, label).
  RngStream child(std::string_view label) const;
  RngStream child(std::string_view label, std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

Tensor rng_uniform(RngStream& stream, double lo, double hi, Shape shape);

}  // namespace forecast
