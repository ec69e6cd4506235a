#pragma once
#include <cstdint>
#include <memory>
#include <string>

#include "pqcan/backend.hpp"
#include "pqcan/bus.hpp"
#include "pqcan/profile.hpp"
#include "pqcan/sim_time.hpp"

namespace pqcan {

enum class FailureReason { none, timeout, crypto_mismatch };

std::string_view to_string(FailureReason reason);

struct SessionConfig {
  DurationNs receiver_timeout = 2 * kNsPerSec;
  DurationNs start_jitter = 0;  // Bob's listen start uniform in [0, jitter]
  std::uint32_t alice_id = 0x010;
  std::uint32_t bob_id = 0x011;
  std::size_t message_length = 32;  // DSA only
  ComputeModelKind compute_model = ComputeModelKind::table_driven;
};

struct SessionResult {
  bool success = false;
  FailureReason failure_reason = FailureReason::none;
  // Per-operation compute times, ms. op2/op3 = encapsulation/decapsulation
  // for KEM, signing/verification for DSA.
  double keygen_ms = 0.0;
  double op2_ms = 0.0;
  double op3_ms = 0.0;
  double wall_clock_ms = 0.0;   // handshake start to final completion
  double overhead_ms = 0.0;     // see kem_overhead_ms / dsa_overhead_ms
  double crypto_only_ms = 0.0;  // keygen + op2 + op3
  double nominal_ms = 0.0;      // DSA: bare message wire time; KEM: 0
  std::uint64_t bytes_on_wire = 0;  // protocol frames only, 8 per frame
};

// KEM overhead is the whole exchange: keygen start to decapsulation end.
double kem_overhead_ms(double wall_clock_ms);

// Wire time of the unsigned message alone, sent over the same transport at
// the same bit rate: the baseline an authenticated send is compared against.
double dsa_nominal_wire_ms(std::size_t message_length, BitRate rate,
                           const StuffingModel& stuffing);

double dsa_overhead_ms(double wall_clock_ms, double nominal_ms);

// Runs one two-party handshake on `bus` to completion (or timeout) and
// returns the measurements. The bus must be freshly constructed; both
// parties run on the ECU clock in `ecu` and the wire rate is bus.rate().
//
// KEM: Alice keygen -> pk to Bob -> Bob encapsulate -> ct to Alice ->
// Alice decapsulate, success iff shared secrets match.
// DSA: Alice keygen -> pk to Bob -> Alice sign -> message+signature to
// Bob -> Bob verify, success iff the signature checks.
//
// `session_seed` drives every random choice (op timing draws, backend key
// material, message bytes, Bob's start jitter) through named substreams,
// so one (config, seed) pair replays exactly.
SessionResult run_kem_session(CanBus& bus, const SessionConfig& cfg,
                              const AlgorithmProfile& profile,
                              CryptoBackend& backend, const EcuConfig& ecu,
                              std::uint64_t session_seed);

SessionResult run_dsa_session(CanBus& bus, const SessionConfig& cfg,
                              const AlgorithmProfile& profile,
                              CryptoBackend& backend, const EcuConfig& ecu,
                              std::uint64_t session_seed);

// Dispatches on profile.kind.
SessionResult run_session(CanBus& bus, const SessionConfig& cfg,
                          const AlgorithmProfile& profile,
                          CryptoBackend& backend, const EcuConfig& ecu,
                          std::uint64_t session_seed);

// algorithm,config,seed,success,failure_reason,keygen_ms,op2_ms,op3_ms,
// overhead_ms,wall_ms,bytes_on_wire with times as %.6f.
std::string session_csv_header();
std::string session_csv_line(const std::string& algorithm,
                             const std::string& config, std::uint64_t seed,
                             const SessionResult& r);

}  // namespace pqcan
