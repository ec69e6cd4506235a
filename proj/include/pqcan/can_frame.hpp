#pragma once
#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "pqcan/sim_time.hpp"

namespace pqcan {

inline constexpr std::uint32_t kMaxStandardId = 0x7FF;

// CAN 2.0A standard data frame: 11-bit identifier, 0-8 data bytes.
// Only this frame type is modeled; no extended IDs, no remote frames.
struct CanFrame {
  std::uint32_t id = 0;
  std::uint8_t dlc = 0;
  std::array<std::uint8_t, 8> data{};

  // Throws std::invalid_argument on id > 0x7FF or more than 8 bytes.
  static CanFrame make(std::uint32_t id, std::span<const std::uint8_t> payload);

  std::span<const std::uint8_t> bytes() const { return {data.data(), dlc}; }
};

struct BitRate {
  std::uint32_t bits_per_second = 0;
};

namespace rates {
inline constexpr BitRate k125k{125'000};
inline constexpr BitRate k500k{500'000};
inline constexpr BitRate k1M{1'000'000};
}  // namespace rates

// How bit stuffing inflates on-wire frame length. The stuffable region is
// SOF through the CRC sequence (34 + 8*dlc bits); worst case inserts one
// stuff bit per 4 of those after the first.
struct StuffingModel {
  enum class Mode { none, worst_case, expected };

  Mode mode = Mode::expected;
  double fraction = 0.05;  // extra-bit ratio, meaningful for `expected`

  static StuffingModel none() { return {Mode::none, 0.0}; }
  static StuffingModel worst_case() { return {Mode::worst_case, 0.0}; }
  // Throws std::invalid_argument outside [0, 0.25].
  static StuffingModel expected(double fraction);

  // "none" | "worst_case" | "expected:<fraction>"
  static StuffingModel parse(std::string_view text);
  std::string str() const;
};

// Fixed fields SOF+ID+RTR+IDE+r0+DLC+CRC+delims+ACK+EOF = 44 bits, plus the
// 3-bit interframe space, plus data: 47 + 8*dlc.
int nominal_bit_length(const CanFrame& frame);
int nominal_bit_length_for_dlc(int dlc);

int stuffed_bit_length(const CanFrame& frame, const StuffingModel& model);
int stuffed_bit_length_for_dlc(int dlc, const StuffingModel& model);

// Wire time of one frame, exact in integer nanoseconds (round half up).
// Throws std::invalid_argument if rate is zero.
DurationNs frame_duration(const CanFrame& frame, BitRate rate,
                          const StuffingModel& model);
DurationNs frame_duration_for_dlc(int dlc, BitRate rate,
                                  const StuffingModel& model);

}  // namespace pqcan
