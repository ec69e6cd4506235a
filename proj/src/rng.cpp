#include "pqcan/rng.hpp"

#include <cmath>
#include <numbers>

namespace pqcan {

namespace {

std::uint64_t finalize(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

std::uint64_t Rng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ull;
  return finalize(state_);
}

double Rng::next_unit() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t Rng::uniform(std::uint64_t lo, std::uint64_t hi) {
  std::uint64_t range = hi - lo + 1;
  if (range == 0) return next_u64();  // full 64-bit range
  std::uint64_t reject_below = (0 - range) % range;
  for (;;) {
    std::uint64_t x = next_u64();
    if (x >= reject_below) return lo + x % range;
  }
}

double Rng::normal(double mean, double stddev) {
  double u1 = next_unit();
  double u2 = next_unit();
  double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t w = next_u64();
    for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(w >> (8 * b));
    }
  }
}

std::uint64_t hash64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x00000100000001B3ull;
  }
  return h;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  // The inner round keeps the combiner order-sensitive: mix(a, b) and
  // mix(b, a) name different streams.
  return finalize(finalize(base + 0x9E3779B97F4A7C15ull) ^ salt);
}

}  // namespace pqcan
