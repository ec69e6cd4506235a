#pragma once
#include <cstdint>
#include <span>
#include <string_view>

namespace pqcan {

// Deterministic 64-bit generator (splitmix64). The standard library
// distributions are implementation-defined, so every transform lives here
// and produces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform double in (0, 1]; never 0 so it is safe under log().
  double next_unit();

  // Uniform integer in [lo, hi], inclusive.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);

  // One Box-Muller draw; consumes exactly two 64-bit outputs.
  double normal(double mean, double stddev);

  void fill(std::span<std::uint8_t> out);

 private:
  std::uint64_t state_;
};

// FNV-1a over the bytes of `s`.
std::uint64_t hash64(std::string_view s);

// Splitmix finalizer over base ^ salt; the splittable-seed combiner used
// for per-cell and per-stream derivation (documented in the README).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt);

// Named sub-stream of a seed, e.g. derive_stream(seed, "jitter").
inline Rng derive_stream(std::uint64_t seed, std::string_view label) {
  return Rng(mix_seed(seed, hash64(label)));
}

}  // namespace pqcan
