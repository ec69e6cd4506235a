#pragma once
#include <cstdint>

namespace pqcan {

// Simulation clock. Integer nanoseconds so event ordering is exact and
// runs are bit-reproducible; never floating point.
using SimTime = std::uint64_t;
using DurationNs = std::uint64_t;

inline constexpr DurationNs kNsPerUs = 1'000;
inline constexpr DurationNs kNsPerMs = 1'000'000;
inline constexpr DurationNs kNsPerSec = 1'000'000'000;

inline constexpr double ns_to_ms(DurationNs ns) {
  return static_cast<double>(ns) / static_cast<double>(kNsPerMs);
}

DurationNs ms_to_ns(double ms);  // clamps negatives to 0, rounds half up

}  // namespace pqcan
