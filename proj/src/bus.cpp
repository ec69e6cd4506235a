#include "pqcan/bus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pqcan {

std::string_view to_string(BusEventKind kind) {
  switch (kind) {
    case BusEventKind::tx_queued: return "tx_queued";
    case BusEventKind::tx_start: return "tx_start";
    case BusEventKind::tx_end: return "tx_end";
    case BusEventKind::rx_deliver: return "rx_deliver";
    case BusEventKind::timeout_fired: return "timeout_fired";
  }
  return "?";
}

std::string format_trace_line(const BusEvent& ev) {
  char head[64];
  std::snprintf(head, sizeof head, "%llu\t%s\t%d\t",
                static_cast<unsigned long long>(ev.time),
                std::string(to_string(ev.kind)).c_str(), ev.node_id);
  std::string out = head;
  if (!ev.has_frame) {
    out += "-\t-\t-";
    return out;
  }
  char mid[32];
  std::snprintf(mid, sizeof mid, "0x%03x\t%u\t", ev.frame.id, ev.frame.dlc);
  out += mid;
  if (ev.frame.dlc == 0) {
    out += "-";
  } else {
    char hex[4];
    for (int i = 0; i < ev.frame.dlc; ++i) {
      std::snprintf(hex, sizeof hex, "%02x", ev.frame.data[i]);
      out += hex;
    }
  }
  return out;
}

std::string format_trace(std::span<const BusEvent> trace) {
  std::string out;
  for (const BusEvent& ev : trace) {
    out += format_trace_line(ev);
    out += '\n';
  }
  return out;
}

double bus_utilization(std::span<const BusEvent> trace, SimTime begin, SimTime end) {
  if (end <= begin) throw std::invalid_argument("empty utilization window");
  std::uint64_t busy = 0;
  bool open = false;
  SimTime open_start = begin;
  auto add = [&](SimTime s, SimTime e) {
    SimTime lo = std::max(s, begin);
    SimTime hi = std::min(e, end);
    if (hi > lo) busy += hi - lo;
  };
  for (const BusEvent& ev : trace) {
    if (ev.kind == BusEventKind::tx_start) {
      open = true;
      open_start = ev.time;
    } else if (ev.kind == BusEventKind::tx_end) {
      add(open ? open_start : begin, ev.time);
      open = false;
    }
  }
  if (open) add(open_start, end);
  return static_cast<double>(busy) / static_cast<double>(end - begin);
}

PendingTx arbitrate(std::span<const PendingTx> pending) {
  if (pending.empty()) throw std::invalid_argument("arbitration with no contenders");
  PendingTx best = pending[0];
  for (const PendingTx& p : pending.subspan(1)) {
    if (p.can_id < best.can_id ||
        (p.can_id == best.can_id && p.node_id < best.node_id)) {
      best = p;
    }
  }
  return best;
}

bool CanBus::EventOrder::operator()(const EventRec& a, const EventRec& b) const {
  if (a.time != b.time) return a.time > b.time;
  if (a.cls != b.cls) return a.cls > b.cls;
  if (a.node_id != b.node_id) return a.node_id > b.node_id;
  return a.seq > b.seq;
}

CanBus::CanBus(BitRate rate, StuffingModel stuffing, std::uint64_t seed)
    : rate_(rate), stuffing_(stuffing), seed_(seed) {
  if (rate.bits_per_second == 0) {
    throw std::invalid_argument("bit rate must be nonzero");
  }
}

int CanBus::attach_node(IdFilter filter) {
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{id, std::move(filter), nullptr, {}});
  return id;
}

void CanBus::set_rx_callback(int node_id, RxCallback cb) {
  nodes_.at(node_id).on_rx = std::move(cb);
}

void CanBus::push_event(SimTime t, std::uint8_t cls, int node, std::uint64_t ref) {
  events_.push(EventRec{t, cls, node, next_seq_++, ref});
}

void CanBus::record(SimTime t, BusEventKind kind, int node_id, const CanFrame* frame) {
  if (!record_trace_) return;
  BusEvent ev;
  ev.time = t;
  ev.kind = kind;
  ev.node_id = node_id;
  if (frame) {
    ev.has_frame = true;
    ev.frame = *frame;
  }
  trace_.push_back(ev);
}

void CanBus::queue_frame(int node_id, const CanFrame& frame, SimTime earliest) {
  Node& node = nodes_.at(node_id);
  SimTime at = std::max(earliest, now_);
  std::uint64_t entry_id = next_entry_++;
  node.txq.push_back(TxEntry{frame, at, entry_id});
  push_event(at, kFrameArm, node_id, entry_id);
}

CanBus::TimerId CanBus::arm_timer(int node_id, SimTime at, TimeCallback cb) {
  TimerId id = next_timer_++;
  timers_.emplace(id, std::move(cb));
  push_event(std::max(at, now_), kTimer, node_id, id);
  return id;
}

void CanBus::cancel_timer(TimerId id) { timers_.erase(id); }

void CanBus::schedule(int node_id, SimTime at, TimeCallback cb) {
  std::uint64_t id = next_callback_++;
  callbacks_.emplace(id, std::move(cb));
  push_event(std::max(at, now_), kCallback, node_id, id);
}

void CanBus::attach_traffic_generator(const TrafficGenConfig& cfg) {
  if (!(cfg.target_load >= 0.0 && cfg.target_load <= 1.0)) {
    throw std::invalid_argument("traffic load must be in [0, 1]");
  }
  if (cfg.id_low > cfg.id_high || cfg.id_high > kMaxStandardId) {
    throw std::invalid_argument("bad traffic id range");
  }
  if (cfg.target_load == 0.0) return;
  DurationNs frame_time = frame_duration_for_dlc(8, rate_, stuffing_);
  TrafficGen gen;
  gen.node = attach_node([](std::uint32_t) { return false; });
  gen.period = static_cast<DurationNs>(
      std::llround(static_cast<double>(frame_time) / cfg.target_load));
  if (gen.period == 0) gen.period = 1;
  gen.id_low = cfg.id_low;
  gen.id_high = cfg.id_high;
  gen.rng = Rng(cfg.seed);
  std::size_t idx = traffic_.size();
  traffic_.push_back(std::move(gen));
  schedule(traffic_[idx].node, now_, [this, idx](SimTime t) { traffic_tick(idx, t); });
}

void CanBus::traffic_tick(std::size_t gen, SimTime t) {
  TrafficGen& g = traffic_[gen];
  CanFrame f;
  f.id = static_cast<std::uint32_t>(g.rng.uniform(g.id_low, g.id_high));
  f.dlc = 8;
  g.rng.fill(f.data);
  queue_frame(g.node, f, t);
  schedule(g.node, t + g.period, [this, gen](SimTime next) { traffic_tick(gen, next); });
}

void CanBus::request_arbitration(SimTime t) {
  if (arbitration_pending_ && arbitration_time_ == t) return;
  arbitration_pending_ = true;
  arbitration_time_ = t;
  push_event(t, kArbitrate, 0, 0);
}

void CanBus::arbitrate_now(SimTime t) {
  if (tx_active_) return;
  std::vector<PendingTx> pending;
  for (Node& node : nodes_) {
    if (!node.txq.empty() && node.txq.front().not_before <= t) {
      pending.push_back(PendingTx{node.id, node.txq.front().frame.id});
    }
  }
  if (pending.empty()) return;
  PendingTx winner = arbitrate(pending);
  int same_id = 0;
  for (const PendingTx& p : pending) {
    if (p.can_id == winner.can_id) ++same_id;
  }
  if (same_id > 1) ++tie_warnings_;
  Node& node = nodes_[winner.node_id];
  CanFrame frame = node.txq.front().frame;
  node.txq.pop_front();
  tx_active_ = true;
  tx_frame_ = frame;
  tx_node_ = winner.node_id;
  record(t, BusEventKind::tx_start, winner.node_id, &frame);
  push_event(t + frame_duration(frame, rate_, stuffing_), kTxEnd, winner.node_id, 0);
}

void CanBus::dispatch(const EventRec& ev) {
  now_ = ev.time;
  switch (ev.cls) {
    case kTxEnd: {
      CanFrame frame = tx_frame_;
      int sender = tx_node_;
      tx_active_ = false;
      tx_node_ = -1;
      record(ev.time, BusEventKind::tx_end, sender, &frame);
      for (Node& node : nodes_) {
        if (node.id == sender || !node.filter || !node.filter(frame.id)) continue;
        record(ev.time, BusEventKind::rx_deliver, node.id, &frame);
        if (node.on_rx) node.on_rx(frame, ev.time);
      }
      request_arbitration(ev.time);
      break;
    }
    case kTimer: {
      auto it = timers_.find(ev.ref);
      if (it == timers_.end()) break;  // cancelled
      TimeCallback cb = std::move(it->second);
      timers_.erase(it);
      record(ev.time, BusEventKind::timeout_fired, ev.node_id, nullptr);
      cb(ev.time);
      break;
    }
    case kFrameArm: {
      const Node& node = nodes_[ev.node_id];
      for (const TxEntry& e : node.txq) {
        if (e.id == ev.ref) {
          record(ev.time, BusEventKind::tx_queued, ev.node_id, &e.frame);
          break;
        }
      }
      request_arbitration(ev.time);
      break;
    }
    case kCallback: {
      auto it = callbacks_.find(ev.ref);
      if (it == callbacks_.end()) break;
      TimeCallback cb = std::move(it->second);
      callbacks_.erase(it);
      cb(ev.time);
      break;
    }
    case kArbitrate: {
      if (arbitration_pending_ && arbitration_time_ == ev.time) {
        arbitration_pending_ = false;
      }
      arbitrate_now(ev.time);
      break;
    }
  }
}

std::vector<BusEvent> CanBus::run_until(SimTime t_end) {
  if (t_end < now_) throw std::invalid_argument("run_until into the past");
  std::size_t mark = trace_.size();
  while (!events_.empty() && events_.top().time <= t_end) {
    EventRec ev = events_.top();
    events_.pop();
    dispatch(ev);
  }
  now_ = t_end;
  return {trace_.begin() + static_cast<std::ptrdiff_t>(mark), trace_.end()};
}

bool CanBus::run_while(const std::function<bool()>& keep_going,
                       SimTime hard_deadline) {
  while (keep_going()) {
    if (events_.empty() || events_.top().time > hard_deadline) return false;
    EventRec ev = events_.top();
    events_.pop();
    dispatch(ev);
  }
  return true;
}

}  // namespace pqcan
