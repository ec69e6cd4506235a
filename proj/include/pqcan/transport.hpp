#pragma once
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "pqcan/can_frame.hpp"

namespace pqcan {

// Segmentation of arbitrary-length payloads into CAN frames.
//
// Wire format (normative, see README "Transport header"):
//   first frame:        byte0 = 0x10, bytes1-4 = payload length (u32 BE),
//                       bytes5-7 = first 3 payload bytes
//   consecutive frame:  byte0 = 0x20 | (sequence & 0x0F), sequence starting
//                       at 1, bytes1-7 = next 7 payload bytes
// The marker ranges are disjoint, so a first frame is recognizable in any
// state and the loss of one frame always shows up as a sequence mismatch.
// Every frame is transmitted with dlc 8; short tails are zero padded and
// receivers rely on the declared length. One in-flight message per CAN ID.

inline constexpr std::uint8_t kFirstFrameMarker = 0x10;
inline constexpr std::uint8_t kConsecutiveFrameMarker = 0x20;
inline constexpr std::size_t kFirstFramePayload = 3;
inline constexpr std::size_t kConsecutiveFramePayload = 7;

// 1 frame for payloads up to 3 bytes, else 1 + ceil((n - 3) / 7).
std::size_t frame_count_for_payload(std::size_t payload_len);

// Throws std::length_error for payloads >= 2^32.
std::vector<CanFrame> segment(std::span<const std::uint8_t> payload,
                              std::uint32_t can_id);

// Total stuffed bits of all frames segment() would emit.
std::uint64_t transmission_bit_cost(std::size_t payload_len,
                                    const StuffingModel& model);

class Reassembler {
 public:
  enum class Status { incomplete, complete, error };
  enum class Error { none, sequence_gap, orphan, restart };

  struct Feed {
    Status status = Status::incomplete;
    Error error = Error::none;
    bool message_started = false;  // this frame opened a new message
    int expected_seq = -1;         // raw byte0 values, filled for sequence_gap
    int got_seq = -1;
    std::vector<std::uint8_t> payload;  // filled when complete
  };

  // Frames are matched to in-progress messages by CAN ID. A first frame
  // always (re)starts that ID's message; any other byte0 than the expected
  // consecutive marker discards the message as a sequence gap.
  Feed feed(const CanFrame& frame);

  bool in_progress(std::uint32_t can_id) const;
  void reset(std::uint32_t can_id);
  void reset_all();

 private:
  struct Message {
    std::uint64_t expected_len = 0;
    std::uint8_t next_seq = kConsecutiveFrameMarker | 1;  // raw byte0
    std::vector<std::uint8_t> buffer;
  };
  std::map<std::uint32_t, Message> active_;
};

}  // namespace pqcan
