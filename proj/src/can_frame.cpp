#include "pqcan/can_frame.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pqcan {

CanFrame CanFrame::make(std::uint32_t id, std::span<const std::uint8_t> payload) {
  if (id > kMaxStandardId) {
    throw std::invalid_argument("CAN id " + std::to_string(id) + " exceeds 11 bits");
  }
  if (payload.size() > 8) {
    throw std::invalid_argument("CAN frame carries at most 8 bytes, got " +
                                std::to_string(payload.size()));
  }
  CanFrame f;
  f.id = id;
  f.dlc = static_cast<std::uint8_t>(payload.size());
  for (std::size_t i = 0; i < payload.size(); ++i) f.data[i] = payload[i];
  return f;
}

StuffingModel StuffingModel::expected(double fraction) {
  if (!(fraction >= 0.0 && fraction <= 0.25)) {
    throw std::invalid_argument("stuffing fraction must be in [0, 0.25], got " +
                                std::to_string(fraction));
  }
  return {Mode::expected, fraction};
}

StuffingModel StuffingModel::parse(std::string_view text) {
  if (text == "none") return none();
  if (text == "worst_case") return worst_case();
  if (text == "expected") return expected(0.05);
  if (text.starts_with("expected:")) {
    std::string_view num = text.substr(9);
    double f = 0;
    auto [p, ec] = std::from_chars(num.data(), num.data() + num.size(), f);
    if (ec == std::errc{} && p == num.data() + num.size()) return expected(f);
  }
  throw std::invalid_argument("unknown stuffing model '" + std::string(text) + "'");
}

std::string StuffingModel::str() const {
  switch (mode) {
    case Mode::none:
      return "none";
    case Mode::worst_case:
      return "worst_case";
    case Mode::expected: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "expected:%g", fraction);
      return buf;
    }
  }
  return "none";
}

int nominal_bit_length_for_dlc(int dlc) {
  if (dlc < 0 || dlc > 8) {
    throw std::invalid_argument("dlc must be in [0, 8], got " + std::to_string(dlc));
  }
  return 47 + 8 * dlc;
}

int nominal_bit_length(const CanFrame& frame) {
  return nominal_bit_length_for_dlc(frame.dlc);
}

int stuffed_bit_length_for_dlc(int dlc, const StuffingModel& model) {
  int nominal = nominal_bit_length_for_dlc(dlc);
  int stuffable = 34 + 8 * dlc;
  int worst = nominal + (stuffable - 1) / 4;
  switch (model.mode) {
    case StuffingModel::Mode::none:
      return nominal;
    case StuffingModel::Mode::worst_case:
      return worst;
    case StuffingModel::Mode::expected: {
      int extra = static_cast<int>(std::lround(model.fraction * stuffable));
      int bits = nominal + extra;
      return bits < worst ? bits : worst;
    }
  }
  return nominal;
}

int stuffed_bit_length(const CanFrame& frame, const StuffingModel& model) {
  return stuffed_bit_length_for_dlc(frame.dlc, model);
}

DurationNs frame_duration_for_dlc(int dlc, BitRate rate, const StuffingModel& model) {
  if (rate.bits_per_second == 0) {
    throw std::invalid_argument("bit rate must be nonzero");
  }
  std::uint64_t bits = static_cast<std::uint64_t>(stuffed_bit_length_for_dlc(dlc, model));
  return (bits * kNsPerSec + rate.bits_per_second / 2) / rate.bits_per_second;
}

DurationNs frame_duration(const CanFrame& frame, BitRate rate, const StuffingModel& model) {
  return frame_duration_for_dlc(frame.dlc, rate, model);
}

}  // namespace pqcan
