#include "pqcan/transport.hpp"

#include <stdexcept>

namespace pqcan {

std::size_t frame_count_for_payload(std::size_t payload_len) {
  if (payload_len <= kFirstFramePayload) return 1;
  std::size_t rest = payload_len - kFirstFramePayload;
  return 1 + (rest + kConsecutiveFramePayload - 1) / kConsecutiveFramePayload;
}

std::vector<CanFrame> segment(std::span<const std::uint8_t> payload,
                              std::uint32_t can_id) {
  if (payload.size() >= (1ull << 32)) {
    throw std::length_error("payload of " + std::to_string(payload.size()) +
                            " bytes exceeds the 32-bit length field");
  }
  std::vector<CanFrame> out;
  out.reserve(frame_count_for_payload(payload.size()));

  CanFrame first;
  first.id = can_id;
  first.dlc = 8;
  first.data[0] = kFirstFrameMarker;
  std::uint32_t len = static_cast<std::uint32_t>(payload.size());
  first.data[1] = static_cast<std::uint8_t>(len >> 24);
  first.data[2] = static_cast<std::uint8_t>(len >> 16);
  first.data[3] = static_cast<std::uint8_t>(len >> 8);
  first.data[4] = static_cast<std::uint8_t>(len);
  std::size_t pos = 0;
  while (pos < kFirstFramePayload && pos < payload.size()) {
    first.data[5 + pos] = payload[pos];
    ++pos;
  }
  out.push_back(first);

  std::size_t seq = 1;
  while (pos < payload.size()) {
    CanFrame f;
    f.id = can_id;
    f.dlc = 8;
    f.data[0] = static_cast<std::uint8_t>(kConsecutiveFrameMarker | (seq & 0x0F));
    for (std::size_t i = 0; i < kConsecutiveFramePayload && pos < payload.size();
         ++i, ++pos) {
      f.data[1 + i] = payload[pos];
    }
    out.push_back(f);
    ++seq;
  }
  return out;
}

std::uint64_t transmission_bit_cost(std::size_t payload_len,
                                    const StuffingModel& model) {
  return static_cast<std::uint64_t>(frame_count_for_payload(payload_len)) *
         static_cast<std::uint64_t>(stuffed_bit_length_for_dlc(8, model));
}

Reassembler::Feed Reassembler::feed(const CanFrame& frame) {
  Feed r;
  auto it = active_.find(frame.id);
  std::uint8_t b0 = frame.data[0];

  if (b0 == kFirstFrameMarker) {
    if (it != active_.end()) {
      r.error = Error::restart;
      active_.erase(it);
    }
    Message m;
    m.expected_len = (std::uint64_t(frame.data[1]) << 24) |
                     (std::uint64_t(frame.data[2]) << 16) |
                     (std::uint64_t(frame.data[3]) << 8) |
                     std::uint64_t(frame.data[4]);
    for (std::size_t i = 0; i < kFirstFramePayload && m.buffer.size() < m.expected_len;
         ++i) {
      m.buffer.push_back(frame.data[5 + i]);
    }
    r.message_started = true;
    if (m.buffer.size() == m.expected_len) {
      r.status = Status::complete;
      r.payload = std::move(m.buffer);
    } else {
      m.buffer.reserve(m.expected_len);
      active_.emplace(frame.id, std::move(m));
    }
    return r;
  }

  if (it == active_.end()) {
    r.status = Status::error;
    r.error = Error::orphan;
    r.got_seq = b0;
    return r;
  }

  Message& m = it->second;
  if (b0 != m.next_seq) {
    r.status = Status::error;
    r.error = Error::sequence_gap;
    r.expected_seq = m.next_seq;
    r.got_seq = b0;
    active_.erase(it);
    return r;
  }

  for (std::size_t i = 0; i < kConsecutiveFramePayload && m.buffer.size() < m.expected_len;
       ++i) {
    m.buffer.push_back(frame.data[1 + i]);
  }
  m.next_seq = kConsecutiveFrameMarker | ((m.next_seq + 1) & 0x0F);
  if (m.buffer.size() == m.expected_len) {
    r.status = Status::complete;
    r.payload = std::move(m.buffer);
    active_.erase(it);
  }
  return r;
}

bool Reassembler::in_progress(std::uint32_t can_id) const {
  return active_.count(can_id) != 0;
}

void Reassembler::reset(std::uint32_t can_id) { active_.erase(can_id); }

void Reassembler::reset_all() { active_.clear(); }

}  // namespace pqcan
