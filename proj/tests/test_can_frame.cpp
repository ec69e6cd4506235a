#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pqcan/can_frame.hpp"

using namespace pqcan;

TEST_CASE("frame construction and validation") {
  std::vector<std::uint8_t> payload{1, 2, 3};
  CanFrame f = CanFrame::make(0x123, payload);
  CHECK(f.id == 0x123);
  CHECK(f.dlc == 3);
  CHECK(f.data[0] == 1);
  CHECK(f.data[3] == 0);
  CHECK(f.bytes().size() == 3);

  std::vector<std::uint8_t> nine(9, 0);
  CHECK_THROWS_AS(CanFrame::make(0x800, payload), std::invalid_argument);
  CHECK_THROWS_AS(CanFrame::make(0x100, nine), std::invalid_argument);
  CHECK_NOTHROW(CanFrame::make(kMaxStandardId, payload));
}

TEST_CASE("nominal frame length on the wire") {
  CHECK(nominal_bit_length_for_dlc(0) == 47);
  CHECK(nominal_bit_length_for_dlc(3) == 71);
  CHECK(nominal_bit_length_for_dlc(8) == 111);
  CHECK_THROWS_AS(nominal_bit_length_for_dlc(9), std::invalid_argument);
  CHECK_THROWS_AS(nominal_bit_length_for_dlc(-1), std::invalid_argument);

  CanFrame f = CanFrame::make(0x1, std::vector<std::uint8_t>(8, 0));
  CHECK(nominal_bit_length(f) == 111);
}

TEST_CASE("worst-case stuffing adds one bit per four stuffable past the first") {
  // stuffable region is 34 + 8*dlc bits
  CHECK(stuffed_bit_length_for_dlc(0, StuffingModel::worst_case()) == 47 + 8);
  CHECK(stuffed_bit_length_for_dlc(8, StuffingModel::worst_case()) == 111 + 24);
  CHECK(stuffed_bit_length_for_dlc(8, StuffingModel::none()) == 111);
}

TEST_CASE("expected stuffing rounds and clamps to the worst case") {
  CHECK(stuffed_bit_length_for_dlc(8, StuffingModel::expected(0.10)) == 121);
  CHECK(stuffed_bit_length_for_dlc(8, StuffingModel::expected(0.0)) == 111);
  // 0.25 * 34 rounds to 9, above the 8-bit worst case: clamped
  CHECK(stuffed_bit_length_for_dlc(0, StuffingModel::expected(0.25)) == 55);
}

TEST_CASE("expected fraction bounds") {
  CHECK_NOTHROW(StuffingModel::expected(0.0));
  CHECK_NOTHROW(StuffingModel::expected(0.25));
  CHECK_THROWS_AS(StuffingModel::expected(-0.01), std::invalid_argument);
  CHECK_THROWS_AS(StuffingModel::expected(0.26), std::invalid_argument);
}

TEST_CASE("stuffing model text form round trips") {
  CHECK(StuffingModel::parse("none").mode == StuffingModel::Mode::none);
  CHECK(StuffingModel::parse("worst_case").mode == StuffingModel::Mode::worst_case);
  StuffingModel e = StuffingModel::parse("expected:0.1");
  CHECK(e.mode == StuffingModel::Mode::expected);
  CHECK(e.fraction == doctest::Approx(0.1));
  CHECK(StuffingModel::parse(StuffingModel::none().str()).mode ==
        StuffingModel::Mode::none);
  StuffingModel back = StuffingModel::parse(StuffingModel::expected(0.05).str());
  CHECK(back.fraction == doctest::Approx(0.05));
  CHECK_THROWS_AS(StuffingModel::parse("sometimes"), std::invalid_argument);
  CHECK_THROWS_AS(StuffingModel::parse("expected:0.5"), std::invalid_argument);
}

TEST_CASE("frame duration at the three stock bit rates") {
  StuffingModel none = StuffingModel::none();
  CHECK(frame_duration_for_dlc(8, rates::k125k, none) == 888000);
  CHECK(frame_duration_for_dlc(8, rates::k500k, none) == 222000);
  CHECK(frame_duration_for_dlc(8, rates::k1M, none) == 111000);
  CHECK(frame_duration_for_dlc(0, rates::k1M, none) == 47000);
  CHECK(frame_duration_for_dlc(8, BitRate{250000}, none) == 444000);

  CanFrame f = CanFrame::make(0x1, std::vector<std::uint8_t>(8, 0));
  CHECK(frame_duration(f, rates::k1M, StuffingModel::worst_case()) == 135000);
}
