#pragma once
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "pqcan/can_frame.hpp"
#include "pqcan/rng.hpp"
#include "pqcan/sim_time.hpp"

namespace pqcan {

enum class BusEventKind { tx_queued, tx_start, tx_end, rx_deliver, timeout_fired };

std::string_view to_string(BusEventKind kind);

struct BusEvent {
  SimTime time = 0;
  BusEventKind kind = BusEventKind::tx_queued;
  int node_id = 0;
  bool has_frame = false;
  CanFrame frame{};
};

// One trace line: time_ns<TAB>kind<TAB>node_id<TAB>can_id<TAB>dlc<TAB>data,
// can_id as 0x%03x, data as lowercase hex, "-" where no frame applies.
// Stable across runs for diffing.
std::string format_trace_line(const BusEvent& ev);
std::string format_trace(std::span<const BusEvent> trace);

// Busy fraction of [begin, end): summed [tx_start, tx_end) overlap divided
// by window length. Throws std::invalid_argument on an empty window.
double bus_utilization(std::span<const BusEvent> trace, SimTime begin,
                       SimTime end);

struct PendingTx {
  int node_id = 0;
  std::uint32_t can_id = 0;
};

// Lowest identifier wins; an identifier tie (a fault on real CAN) resolves
// to the lowest node_id so traces stay total-ordered.
PendingTx arbitrate(std::span<const PendingTx> pending);

// Background load: dlc-8 frames with IDs uniform in [id_low, id_high],
// paced at a fixed inter-frame gap of frame_time / target_load so the
// long-run offered load equals target_load of bus capacity.
struct TrafficGenConfig {
  double target_load = 0.0;  // [0, 1]
  std::uint32_t id_low = 0x100;
  std::uint32_t id_high = 0x7FF;
  std::uint64_t seed = 0;
};

// Deterministic discrete-event model of one shared CAN bus. Single
// threaded by contract; independent instances may run in parallel threads.
//
// Equal-time events process in (class, node_id, sequence) order with
// classes tx_end < timer < queued-frame < callback < arbitration, so
// deliveries at an instant are seen before timers fire at that instant and
// arbitration sees every frame queued at that instant.
class CanBus {
 public:
  using IdFilter = std::function<bool(std::uint32_t)>;
  using RxCallback = std::function<void(const CanFrame&, SimTime)>;
  using TimeCallback = std::function<void(SimTime)>;
  using TimerId = std::uint64_t;

  // Throws std::invalid_argument on a zero bit rate.
  CanBus(BitRate rate, StuffingModel stuffing, std::uint64_t seed);

  BitRate rate() const { return rate_; }
  const StuffingModel& stuffing() const { return stuffing_; }
  std::uint64_t seed() const { return seed_; }
  SimTime now() const { return now_; }

  // Nodes receive every frame whose ID passes their filter, at tx_end time.
  int attach_node(IdFilter filter);
  void set_rx_callback(int node_id, RxCallback cb);

  // The frame contends for the bus no earlier than `earliest` (clamped to
  // the current time); frames from one node transmit in queueing order.
  void queue_frame(int node_id, const CanFrame& frame, SimTime earliest);

  TimerId arm_timer(int node_id, SimTime at, TimeCallback cb);
  void cancel_timer(TimerId id);

  // Internal scheduling hook for protocol machines; not a traced event.
  void schedule(int node_id, SimTime at, TimeCallback cb);

  void attach_traffic_generator(const TrafficGenConfig& cfg);

  // Processes every event with time <= t_end (t_end >= now required) and
  // returns the events recorded during this call.
  std::vector<BusEvent> run_until(SimTime t_end);

  // Processes events while keep_going() holds, the queue is non-empty and
  // event times stay <= hard_deadline. Returns false on deadline/queue
  // exhaustion with keep_going() still true.
  bool run_while(const std::function<bool()>& keep_going,
                 SimTime hard_deadline);

  const std::vector<BusEvent>& trace() const { return trace_; }
  void set_trace_recording(bool on) { record_trace_ = on; }
  std::size_t arbitration_tie_warnings() const { return tie_warnings_; }

 private:
  enum EventClass : std::uint8_t {
    kTxEnd = 0,
    kTimer = 1,
    kFrameArm = 2,
    kCallback = 3,
    kArbitrate = 4,
  };

  struct EventRec {
    SimTime time = 0;
    std::uint8_t cls = 0;
    int node_id = 0;
    std::uint64_t seq = 0;
    std::uint64_t ref = 0;  // timer/callback id, or frame slot for tx_end
  };
  struct EventOrder {
    bool operator()(const EventRec& a, const EventRec& b) const;
  };

  struct TxEntry {
    CanFrame frame;
    SimTime not_before = 0;
    std::uint64_t id = 0;
  };

  struct TrafficGen {
    int node = -1;
    DurationNs period = 0;
    std::uint32_t id_low = 0;
    std::uint32_t id_high = 0;
    Rng rng{0};
  };

  struct Node {
    int id = 0;
    IdFilter filter;
    RxCallback on_rx;
    std::deque<TxEntry> txq;
  };

  void push_event(SimTime t, std::uint8_t cls, int node, std::uint64_t ref);
  void record(SimTime t, BusEventKind kind, int node_id, const CanFrame* frame);
  void dispatch(const EventRec& ev);
  void request_arbitration(SimTime t);
  void arbitrate_now(SimTime t);
  void traffic_tick(std::size_t gen, SimTime t);

  BitRate rate_{};
  StuffingModel stuffing_{};
  std::uint64_t seed_ = 0;
  SimTime now_ = 0;

  std::vector<Node> nodes_;
  std::priority_queue<EventRec, std::vector<EventRec>, EventOrder> events_;
  std::uint64_t next_seq_ = 0;

  bool tx_active_ = false;
  CanFrame tx_frame_{};
  int tx_node_ = -1;

  std::map<TimerId, TimeCallback> timers_;
  TimerId next_timer_ = 1;
  std::map<std::uint64_t, TimeCallback> callbacks_;
  std::uint64_t next_callback_ = 1;
  std::uint64_t next_entry_ = 1;
  bool arbitration_pending_ = false;
  SimTime arbitration_time_ = 0;
  std::vector<TrafficGen> traffic_;

  bool record_trace_ = true;
  std::vector<BusEvent> trace_;
  std::size_t tie_warnings_ = 0;
};

}  // namespace pqcan
