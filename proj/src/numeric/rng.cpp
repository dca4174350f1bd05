#include "forecast/numeric/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "forecast/error.hpp"

namespace forecast {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// FNV-1a, used only to turn labels into seed material.
constexpr std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed), key_(mix64(seed)) {}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  if (!(lo < hi)) {
    throw RangeError("uniform: empty range [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + ")");
  }
  const double v = lo + (hi - lo) * next_double();
  // Rounding can land exactly on hi for wide ranges.
  return v < hi ? v : std::nextafter(hi, lo);
}

double RngStream::normal(double mean, double stddev) {
  double u1 = next_double();
  const double u2 = next_double();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw RangeError("below: n must be positive");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % n;
}

RngStream RngStream::child(std::string_view label) const {
  return RngStream(mix64(seed_ ^ mix64(hash_label(label))));
}

RngStream RngStream::child(std::string_view label, std::uint64_t index) const {
  return RngStream(
      mix64(seed_ ^ mix64(hash_label(label) + (index + 1) * kGamma)));
}

Tensor rng_uniform(RngStream& stream, double lo, double hi, Shape shape) {
  if (!(lo < hi)) {
    throw RangeError("rng_uniform: lo must be below hi");
  }
  Tensor t(std::move(shape));
  for (auto& v : t.values()) v = stream.uniform(lo, hi);
  return t;
}

}  // namespace forecast
