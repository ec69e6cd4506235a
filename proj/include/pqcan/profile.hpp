#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pqcan/can_frame.hpp"
#include "pqcan/rng.hpp"
#include "pqcan/sim_time.hpp"

namespace pqcan {

enum class AlgoKind { kem, dsa };

enum class CryptoOp { keygen, encapsulation, decapsulation, signing, verification };

std::string_view to_string(AlgoKind kind);
std::string_view to_string(CryptoOp op);

// The three ops of a handshake in execution order (keygen, op2, op3).
std::array<CryptoOp, 3> ops_for(AlgoKind kind);

// One simulated ECU class: a clock frequency and the bus bit rate it is
// attached to. Presets high/mid/low: 300/200/120 MHz with 1M/500k/125k bps.
struct EcuConfig {
  std::string name;
  std::uint64_t cpu_hz = 0;
  BitRate bit_rate{};
};

const EcuConfig& ecu_preset(std::string_view name);  // throws on unknown name
std::vector<EcuConfig> default_ecu_configs();        // high, mid, low

// Measured (mean, std) milliseconds for one op on one ECU config.
// `sampling_mean_ms` is the pre-truncation mean solved at load time so that
// a normal(sampling_mean, std) draw clamped at 0 has expectation mean_ms.
struct OpTiming {
  double mean_ms = 0.0;
  double std_ms = 0.0;
  double sampling_mean_ms = 0.0;
};

struct ComputeTimeModel {
  // config name -> op -> timing
  std::map<std::string, std::map<CryptoOp, OpTiming>, std::less<>> table;
  // op -> work cycles; duration = cycles / cpu_hz
  std::map<CryptoOp, std::uint64_t> cycles;
};

enum class ComputeModelKind { table_driven, cycle_based };

struct AlgorithmProfile {
  std::string name;
  AlgoKind kind = AlgoKind::kem;
  int security_level = 0;
  std::size_t public_key_bytes = 0;
  std::size_t secret_key_bytes = 0;
  std::size_t ciphertext_bytes = 0;     // KEM
  std::size_t shared_secret_bytes = 0;  // KEM
  std::size_t signature_bytes = 0;      // DSA
  ComputeTimeModel compute;

  bool has_table_for(std::string_view config) const;
  const OpTiming& table_timing(CryptoOp op, std::string_view config) const;
};

class ProfileSet {
 public:
  // Throws ParseError with file:line references on malformed input,
  // missing fields, unknown kinds, or duplicate names.
  static ProfileSet load(const std::string& path);
  static ProfileSet parse(std::string_view text, std::string_view origin);

  std::span<const AlgorithmProfile> all() const { return profiles_; }
  const AlgorithmProfile* find(std::string_view name) const;
  const AlgorithmProfile& at(std::string_view name) const;  // throws on unknown

 private:
  std::vector<AlgorithmProfile> profiles_;  // file order
};

// One sampled op duration. table_driven draws normal(sampling_mean, std)
// clamped at 0 from `rng`; cycle_based is cycles / cpu_hz, deterministic.
// Throws std::out_of_range for an (op, config) pair the model lacks.
DurationNs sample_op_time(const AlgorithmProfile& profile, CryptoOp op,
                          const EcuConfig& config, ComputeModelKind model,
                          Rng& rng);

}  // namespace pqcan
