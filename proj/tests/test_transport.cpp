#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pqcan/rng.hpp"
#include "pqcan/transport.hpp"

using namespace pqcan;

namespace {

std::vector<std::uint8_t> random_payload(Rng& rng, std::size_t n) {
  std::vector<std::uint8_t> out(n);
  rng.fill(out);
  return out;
}

// Independent count: one frame carries 3 bytes, each further frame 7.
std::size_t oracle_frames(std::size_t n) {
  std::size_t frames = 1;
  std::size_t carried = 3;
  while (carried < n) {
    ++frames;
    carried += 7;
  }
  return frames;
}

}  // namespace

TEST_CASE("frame count matches a step-by-step count") {
  for (std::size_t n = 0; n <= 300; ++n) {
    CHECK(frame_count_for_payload(n) == oracle_frames(n));
  }
  CHECK(frame_count_for_payload(65536) == oracle_frames(65536));
}

TEST_CASE("header layout of the first and consecutive frames") {
  std::vector<std::uint8_t> payload{0xAA, 0xBB, 0xCC, 0xDD};
  auto frames = segment(payload, 0x123);
  REQUIRE(frames.size() == 2);
  CHECK(frames[0].id == 0x123);
  CHECK(frames[0].dlc == 8);
  const std::array<std::uint8_t, 8> first{0x10, 0, 0, 0, 4, 0xAA, 0xBB, 0xCC};
  CHECK(frames[0].data == first);
  const std::array<std::uint8_t, 8> second{0x21, 0xDD, 0, 0, 0, 0, 0, 0};
  CHECK(frames[1].data == second);

  auto tiny = segment(std::vector<std::uint8_t>{9, 8, 7}, 0x10);
  REQUIRE(tiny.size() == 1);
  const std::array<std::uint8_t, 8> lone{0x10, 0, 0, 0, 3, 9, 8, 7};
  CHECK(tiny[0].data == lone);

  auto empty = segment(std::vector<std::uint8_t>{}, 0x7F);
  REQUIRE(empty.size() == 1);
  const std::array<std::uint8_t, 8> zero{0x10, 0, 0, 0, 0, 0, 0, 0};
  CHECK(empty[0].data == zero);
}

TEST_CASE("length field is big-endian") {
  std::vector<std::uint8_t> payload(0x0102, 0xEE);
  auto frames = segment(payload, 0x1);
  CHECK(frames[0].data[1] == 0x00);
  CHECK(frames[0].data[2] == 0x00);
  CHECK(frames[0].data[3] == 0x01);
  CHECK(frames[0].data[4] == 0x02);
}

TEST_CASE("payloads at and around the segmentation boundaries round trip") {
  Rng rng(31337);
  Reassembler rx;
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{2},
                        std::size_t{3}, std::size_t{4}, std::size_t{10},
                        std::size_t{65536}}) {
    auto payload = random_payload(rng, n);
    auto frames = segment(payload, 0x42);
    CHECK(frames.size() == frame_count_for_payload(n));
    Reassembler::Feed last;
    for (const CanFrame& f : frames) last = rx.feed(f);
    REQUIRE(last.status == Reassembler::Status::complete);
    CHECK(last.payload == payload);
    CHECK_FALSE(rx.in_progress(0x42));
  }
}

TEST_CASE("randomized length sweep round trips") {
  Rng rng(9001);
  Reassembler rx;
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = rng.uniform(0, 65536);
    auto payload = random_payload(rng, n);
    auto frames = segment(payload, 0x100);
    Reassembler::Feed last;
    for (const CanFrame& f : frames) last = rx.feed(f);
    REQUIRE(last.status == Reassembler::Status::complete);
    REQUIRE(last.payload == payload);
  }
}

TEST_CASE("sequence numbers wrap past 15") {
  Rng rng(2);
  // 40 consecutive frames: sequence bytes run 0x21..0x2F, 0x20, 0x21, ...
  std::size_t n = 3 + 7 * 40;
  auto payload = random_payload(rng, n);
  auto frames = segment(payload, 0x33);
  REQUIRE(frames.size() == 41);
  CHECK(frames[1].data[0] == 0x21);
  CHECK(frames[15].data[0] == 0x2F);
  CHECK(frames[16].data[0] == 0x20);
  CHECK(frames[17].data[0] == 0x21);
  Reassembler rx;
  Reassembler::Feed last;
  for (const CanFrame& f : frames) last = rx.feed(f);
  CHECK(last.status == Reassembler::Status::complete);
  CHECK(last.payload == payload);
}

TEST_CASE("consecutive markers never collide with the first-frame marker") {
  Rng rng(3);
  std::size_t n = 3 + 7 * 600;  // well past every sequence wrap
  auto payload = random_payload(rng, n);
  auto frames = segment(payload, 0x55);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    CHECK(frames[i].data[0] >= 0x20);
    CHECK(frames[i].data[0] <= 0x2F);
  }
  Reassembler rx;
  Reassembler::Feed last;
  for (const CanFrame& f : frames) {
    last = rx.feed(f);
    CHECK(last.error == Reassembler::Error::none);
  }
  CHECK(last.status == Reassembler::Status::complete);
  CHECK(last.payload == payload);
}

TEST_CASE("a first frame mid-message restarts that identifier") {
  Rng rng(4);
  auto old_payload = random_payload(rng, 50);
  auto new_payload = random_payload(rng, 2);
  Reassembler rx;
  auto old_frames = segment(old_payload, 0x60);
  (void)rx.feed(old_frames[0]);
  (void)rx.feed(old_frames[1]);
  CHECK(rx.in_progress(0x60));

  auto new_frames = segment(new_payload, 0x60);
  Reassembler::Feed r = rx.feed(new_frames[0]);
  CHECK(r.error == Reassembler::Error::restart);
  CHECK(r.message_started);
  CHECK(r.status == Reassembler::Status::complete);  // 2 bytes fit the header
  CHECK(r.payload == new_payload);
}

TEST_CASE("orphan consecutive frame is reported and ignored") {
  Reassembler rx;
  CanFrame f;
  f.id = 0x70;
  f.dlc = 8;
  f.data[0] = 0x23;
  Reassembler::Feed r = rx.feed(f);
  CHECK(r.status == Reassembler::Status::error);
  CHECK(r.error == Reassembler::Error::orphan);
  CHECK(r.got_seq == 0x23);
  CHECK_FALSE(rx.in_progress(0x70));
}

TEST_CASE("a dropped interior frame surfaces as a sequence gap") {
  Rng rng(5);
  auto payload = random_payload(rng, 500);
  auto frames = segment(payload, 0x20);
  REQUIRE(frames.size() > 10);
  Reassembler rx;
  for (std::size_t i = 0; i < 6; ++i) (void)rx.feed(frames[i]);
  // frame 6 lost; frame 7 arrives with sequence 7 where 6 was expected
  Reassembler::Feed r = rx.feed(frames[7]);
  CHECK(r.status == Reassembler::Status::error);
  CHECK(r.error == Reassembler::Error::sequence_gap);
  CHECK(r.expected_seq == 0x26);
  CHECK(r.got_seq == 0x27);
  CHECK_FALSE(rx.in_progress(0x20));  // message discarded

  // the sender may start over afterwards
  Reassembler::Feed again;
  for (const CanFrame& f : frames) again = rx.feed(f);
  CHECK(again.status == Reassembler::Status::complete);
  CHECK(again.payload == payload);
}

TEST_CASE("every interior drop position is caught") {
  Rng rng(7);
  auto payload = random_payload(rng, 3 + 7 * 40);  // spans two sequence wraps
  auto frames = segment(payload, 0x44);
  for (std::size_t drop = 1; drop + 1 < frames.size(); ++drop) {
    Reassembler rx;
    Reassembler::Feed r;
    for (std::size_t i = 0; i < frames.size(); ++i) {
      if (i == drop) continue;
      r = rx.feed(frames[i]);
      if (i == drop + 1) break;
    }
    CHECK(r.status == Reassembler::Status::error);
    CHECK(r.error == Reassembler::Error::sequence_gap);
  }
}

TEST_CASE("interleaved messages on distinct identifiers") {
  Rng rng(6);
  auto pa = random_payload(rng, 40);
  auto pb = random_payload(rng, 33);
  auto fa = segment(pa, 0x101);
  auto fb = segment(pb, 0x202);
  Reassembler rx;
  Reassembler::Feed la, lb;
  std::size_t i = 0, j = 0;
  while (i < fa.size() || j < fb.size()) {
    if (i < fa.size()) la = rx.feed(fa[i++]);
    if (j < fb.size()) lb = rx.feed(fb[j++]);
  }
  CHECK(la.status == Reassembler::Status::complete);
  CHECK(la.payload == pa);
  CHECK(lb.status == Reassembler::Status::complete);
  CHECK(lb.payload == pb);
}

TEST_CASE("oversized payload is rejected up front") {
  std::uint8_t byte = 0;
  std::span<const std::uint8_t> huge(&byte, std::size_t{1} << 32);
  CHECK_THROWS_AS(segment(huge, 0x1), std::length_error);
}

TEST_CASE("transmission cost covers every frame at full length") {
  StuffingModel none = StuffingModel::none();
  CHECK(transmission_bit_cost(0, none) == 111);
  CHECK(transmission_bit_cost(3, none) == 111);
  CHECK(transmission_bit_cost(4, none) == 222);
  CHECK(transmission_bit_cost(800, StuffingModel::worst_case()) ==
        frame_count_for_payload(800) * 135);
}
