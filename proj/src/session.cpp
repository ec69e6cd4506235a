#include "pqcan/session.hpp"

#include <cmath>
#include <cstdio>

#include "pqcan/transport.hpp"

namespace pqcan {

std::string_view to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::none: return "none";
    case FailureReason::timeout: return "timeout";
    case FailureReason::crypto_mismatch: return "crypto_mismatch";
  }
  return "?";
}

double kem_overhead_ms(double wall_clock_ms) { return wall_clock_ms; }

double dsa_nominal_wire_ms(std::size_t message_length, BitRate rate,
                           const StuffingModel& stuffing) {
  std::uint64_t ns = static_cast<std::uint64_t>(frame_count_for_payload(message_length)) *
                     frame_duration_for_dlc(8, rate, stuffing);
  return ns_to_ms(ns);
}

double dsa_overhead_ms(double wall_clock_ms, double nominal_ms) {
  return wall_clock_ms - nominal_ms;
}

namespace {

// Live state of one handshake; shared by the bus callbacks.
struct SessionState {
  bool done = false;
  bool success = false;
  FailureReason reason = FailureReason::none;
  SimTime end_time = 0;

  SimTime listen_start = 0;  // Bob ignores deliveries before this
  Reassembler alice_rx, bob_rx;
  bool alice_awaiting_first = true;
  bool bob_awaiting_first = true;
  CanBus::TimerId alice_timer = 0, bob_timer = 0;
  bool alice_timer_armed = false, bob_timer_armed = false;

  void finish(bool ok, FailureReason why, SimTime at) {
    if (done) return;
    done = true;
    success = ok;
    reason = why;
    end_time = at;
  }
};

struct Draws {
  DurationNs keygen = 0, op2 = 0, op3 = 0;
};

// Timing draws come from two per-party streams in execution order, so a
// session replays identically regardless of how bus events interleave.
Draws draw_timings(const AlgorithmProfile& profile, const EcuConfig& ecu,
                   ComputeModelKind model, Rng& alice, Rng& bob) {
  Draws d;
  auto ops = ops_for(profile.kind);
  d.keygen = sample_op_time(profile, ops[0], ecu, model, alice);
  if (profile.kind == AlgoKind::kem) {
    d.op2 = sample_op_time(profile, ops[1], ecu, model, bob);
    d.op3 = sample_op_time(profile, ops[2], ecu, model, alice);
  } else {
    d.op2 = sample_op_time(profile, ops[1], ecu, model, alice);
    d.op3 = sample_op_time(profile, ops[2], ecu, model, bob);
  }
  return d;
}

SimTime listen_start_for(const SessionConfig& cfg, Rng& jitter) {
  double u = jitter.next_unit();  // drawn even for J=0 to keep streams aligned
  return static_cast<SimTime>(
      std::llround(u * static_cast<double>(cfg.start_jitter)));
}

void fill_result(SessionResult& r, const SessionState& st, const Draws& d,
                 double nominal_ms, std::uint64_t protocol_frames) {
  r.success = st.success;
  r.failure_reason = st.reason;
  r.keygen_ms = ns_to_ms(d.keygen);
  r.op2_ms = ns_to_ms(d.op2);
  r.op3_ms = ns_to_ms(d.op3);
  r.wall_clock_ms = ns_to_ms(st.end_time);
  r.crypto_only_ms = r.keygen_ms + r.op2_ms + r.op3_ms;
  r.nominal_ms = nominal_ms;
  r.overhead_ms = nominal_ms > 0.0 ? dsa_overhead_ms(r.wall_clock_ms, nominal_ms)
                                   : kem_overhead_ms(r.wall_clock_ms);
  r.bytes_on_wire = 8 * protocol_frames;
}

SimTime hard_deadline(const SessionConfig& cfg, const Draws& d, SimTime b0,
                      std::uint64_t protocol_frames, const CanBus& bus) {
  DurationNs wire = protocol_frames * frame_duration_for_dlc(8, bus.rate(), bus.stuffing());
  return b0 + d.keygen + d.op2 + d.op3 + 3 * cfg.receiver_timeout + 4 * wire +
         kNsPerSec;
}

}  // namespace

SessionResult run_kem_session(CanBus& bus, const SessionConfig& cfg,
                              const AlgorithmProfile& profile,
                              CryptoBackend& backend, const EcuConfig& ecu,
                              std::uint64_t session_seed) {
  Rng timing_alice = derive_stream(session_seed, "timing-alice");
  Rng timing_bob = derive_stream(session_seed, "timing-bob");
  Rng backend_rng = derive_stream(session_seed, "backend");
  Rng jitter = derive_stream(session_seed, "jitter");

  Draws d = draw_timings(profile, ecu, cfg.compute_model, timing_alice, timing_bob);

  KeyPair kp = backend.keygen(backend_rng);
  EncapsResult enc = backend.encapsulate(kp.public_key, backend_rng);
  Bytes ss_alice = backend.decapsulate(kp.secret_key, enc.ciphertext);
  bool secrets_match = ss_alice == enc.shared_secret;

  auto st = std::make_shared<SessionState>();
  st->listen_start = listen_start_for(cfg, jitter);

  std::uint64_t frames_pk = frame_count_for_payload(kp.public_key.size());
  std::uint64_t frames_ct = frame_count_for_payload(enc.ciphertext.size());

  int alice = bus.attach_node([id = cfg.bob_id](std::uint32_t x) { return x == id; });
  int bob = bus.attach_node([id = cfg.alice_id](std::uint32_t x) { return x == id; });

  auto fail_timeout = [st](SimTime t) {
    st->finish(false, FailureReason::timeout, t);
  };

  // Alice: keygen runs over [0, d.keygen]; the public key enters her tx
  // queue when it completes and the reply window opens at the same moment.
  for (const CanFrame& f : segment(kp.public_key, cfg.alice_id)) {
    bus.queue_frame(alice, f, d.keygen);
  }
  st->alice_timer = bus.arm_timer(alice, d.keygen + cfg.receiver_timeout, fail_timeout);
  st->alice_timer_armed = true;

  st->bob_timer = bus.arm_timer(bob, st->listen_start + cfg.receiver_timeout,
                                fail_timeout);
  st->bob_timer_armed = true;

  // Bob: reassemble the public key, then encapsulate and send.
  bus.set_rx_callback(bob, [st, &bus, &cfg, &enc, bob, d](const CanFrame& f, SimTime t) {
    if (st->done || t < st->listen_start) return;
    Reassembler::Feed r = st->bob_rx.feed(f);
    if (r.message_started && st->bob_awaiting_first) {
      if (st->bob_timer_armed) bus.cancel_timer(st->bob_timer);
      st->bob_timer_armed = false;
      st->bob_awaiting_first = false;
    }
    if (r.status == Reassembler::Status::error || r.error == Reassembler::Error::restart) {
      if (r.error != Reassembler::Error::orphan && !st->bob_awaiting_first) {
        st->bob_awaiting_first = true;  // fresh window for a resend
        st->bob_timer = bus.arm_timer(bob, t + cfg.receiver_timeout,
                                      [st](SimTime at) {
                                        st->finish(false, FailureReason::timeout, at);
                                      });
        st->bob_timer_armed = true;
      }
      return;
    }
    if (r.status == Reassembler::Status::complete) {
      for (const CanFrame& out : segment(enc.ciphertext, cfg.bob_id)) {
        bus.queue_frame(bob, out, t + d.op2);
      }
    }
  });

  // Alice: reassemble the ciphertext, decapsulate, compare secrets.
  bus.set_rx_callback(alice, [st, &bus, alice, d, secrets_match, &cfg](
                                 const CanFrame& f, SimTime t) {
    if (st->done) return;
    Reassembler::Feed r = st->alice_rx.feed(f);
    if (r.message_started && st->alice_awaiting_first) {
      if (st->alice_timer_armed) bus.cancel_timer(st->alice_timer);
      st->alice_timer_armed = false;
      st->alice_awaiting_first = false;
    }
    if (r.status == Reassembler::Status::error || r.error == Reassembler::Error::restart) {
      if (r.error != Reassembler::Error::orphan && !st->alice_awaiting_first) {
        st->alice_awaiting_first = true;
        st->alice_timer = bus.arm_timer(alice, t + cfg.receiver_timeout,
                                        [st](SimTime at) {
                                          st->finish(false, FailureReason::timeout, at);
                                        });
        st->alice_timer_armed = true;
      }
      return;
    }
    if (r.status == Reassembler::Status::complete) {
      bus.schedule(alice, t + d.op3, [st, secrets_match](SimTime at) {
        st->finish(secrets_match, secrets_match ? FailureReason::none
                                                : FailureReason::crypto_mismatch,
                   at);
      });
    }
  });

  SimTime deadline = hard_deadline(cfg, d, st->listen_start, frames_pk + frames_ct, bus);
  if (!bus.run_while([&] { return !st->done; }, deadline)) {
    st->finish(false, FailureReason::timeout, bus.now());
  }

  SessionResult res;
  fill_result(res, *st, d, 0.0, frames_pk + frames_ct);
  return res;
}

SessionResult run_dsa_session(CanBus& bus, const SessionConfig& cfg,
                              const AlgorithmProfile& profile,
                              CryptoBackend& backend, const EcuConfig& ecu,
                              std::uint64_t session_seed) {
  Rng timing_alice = derive_stream(session_seed, "timing-alice");
  Rng timing_bob = derive_stream(session_seed, "timing-bob");
  Rng backend_rng = derive_stream(session_seed, "backend");
  Rng jitter = derive_stream(session_seed, "jitter");
  Rng message_rng = derive_stream(session_seed, "message");

  Draws d = draw_timings(profile, ecu, cfg.compute_model, timing_alice, timing_bob);

  Bytes message(cfg.message_length);
  message_rng.fill(message);

  KeyPair kp = backend.keygen(backend_rng);
  Bytes signature = backend.sign(kp.secret_key, message, backend_rng);
  bool verifies = backend.verify(kp.public_key, message, signature);

  Bytes signed_payload = message;
  signed_payload.insert(signed_payload.end(), signature.begin(), signature.end());

  auto st = std::make_shared<SessionState>();
  st->listen_start = listen_start_for(cfg, jitter);

  std::uint64_t frames_pk = frame_count_for_payload(kp.public_key.size());
  std::uint64_t frames_msg = frame_count_for_payload(signed_payload.size());

  int alice = bus.attach_node([id = cfg.bob_id](std::uint32_t x) { return x == id; });
  int bob = bus.attach_node([id = cfg.alice_id](std::uint32_t x) { return x == id; });

  // Alice: public key when keygen completes, signed message when the
  // sequential sign completes; per-node FIFO keeps them in order. She
  // awaits nothing, so no timer on her side.
  for (const CanFrame& f : segment(kp.public_key, cfg.alice_id)) {
    bus.queue_frame(alice, f, d.keygen);
  }
  for (const CanFrame& f : segment(signed_payload, cfg.alice_id)) {
    bus.queue_frame(alice, f, d.keygen + d.op2);
  }

  st->bob_timer = bus.arm_timer(bob, st->listen_start + cfg.receiver_timeout,
                                [st](SimTime t) {
                                  st->finish(false, FailureReason::timeout, t);
                                });
  st->bob_timer_armed = true;

  // Bob reassembles the key, then the signed message, then verifies.
  auto got_pk = std::make_shared<bool>(false);
  bus.set_rx_callback(bob, [st, &bus, bob, d, verifies, got_pk, &cfg](
                               const CanFrame& f, SimTime t) {
    if (st->done || t < st->listen_start) return;
    Reassembler::Feed r = st->bob_rx.feed(f);
    if (r.message_started && st->bob_awaiting_first) {
      if (st->bob_timer_armed) bus.cancel_timer(st->bob_timer);
      st->bob_timer_armed = false;
      st->bob_awaiting_first = false;
    }
    if (r.status == Reassembler::Status::error || r.error == Reassembler::Error::restart) {
      if (r.error != Reassembler::Error::orphan && !st->bob_awaiting_first) {
        st->bob_awaiting_first = true;
        st->bob_timer = bus.arm_timer(bob, t + cfg.receiver_timeout,
                                      [st](SimTime at) {
                                        st->finish(false, FailureReason::timeout, at);
                                      });
        st->bob_timer_armed = true;
      }
      return;
    }
    if (r.status != Reassembler::Status::complete) return;
    if (!*got_pk) {
      *got_pk = true;
      st->bob_awaiting_first = true;  // now awaiting the signed message
      st->bob_timer = bus.arm_timer(bob, t + cfg.receiver_timeout,
                                    [st](SimTime at) {
                                      st->finish(false, FailureReason::timeout, at);
                                    });
      st->bob_timer_armed = true;
      return;
    }
    bus.schedule(bob, t + d.op3, [st, verifies](SimTime at) {
      st->finish(verifies, verifies ? FailureReason::none
                                    : FailureReason::crypto_mismatch,
                 at);
    });
  });

  SimTime deadline = hard_deadline(cfg, d, st->listen_start, frames_pk + frames_msg, bus);
  if (!bus.run_while([&] { return !st->done; }, deadline)) {
    st->finish(false, FailureReason::timeout, bus.now());
  }

  double nominal = dsa_nominal_wire_ms(cfg.message_length, bus.rate(), bus.stuffing());
  SessionResult res;
  fill_result(res, *st, d, nominal, frames_pk + frames_msg);
  return res;
}

SessionResult run_session(CanBus& bus, const SessionConfig& cfg,
                          const AlgorithmProfile& profile,
                          CryptoBackend& backend, const EcuConfig& ecu,
                          std::uint64_t session_seed) {
  if (profile.kind == AlgoKind::kem) {
    return run_kem_session(bus, cfg, profile, backend, ecu, session_seed);
  }
  return run_dsa_session(bus, cfg, profile, backend, ecu, session_seed);
}

std::string session_csv_header() {
  return "algorithm,config,seed,success,failure_reason,keygen_ms,op2_ms,op3_ms,"
         "overhead_ms,wall_ms,bytes_on_wire";
}

std::string session_csv_line(const std::string& algorithm,
                             const std::string& config, std::uint64_t seed,
                             const SessionResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%llu,%d,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%llu",
                static_cast<unsigned long long>(seed), r.success ? 1 : 0,
                std::string(to_string(r.failure_reason)).c_str(), r.keygen_ms,
                r.op2_ms, r.op3_ms, r.overhead_ms, r.wall_clock_ms,
                static_cast<unsigned long long>(r.bytes_on_wire));
  return algorithm + "," + config + "," + buf;
}

}  // namespace pqcan
