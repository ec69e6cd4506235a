#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pqcan/profile.hpp"
#include "pqcan/session.hpp"

namespace pqcan {

// One measurement campaign: every algorithm crossed with every ECU config,
// n_iterations fresh sessions per cell.
struct CampaignSpec {
  std::vector<std::string> algorithms;  // profile names
  std::vector<EcuConfig> configs;
  std::size_t n_iterations = 100;
  std::uint64_t master_seed = 1;
  StuffingModel stuffing = StuffingModel::none();
  DurationNs receiver_timeout = 2 * kNsPerSec;
  DurationNs start_jitter = 0;
  double background_load = 0.0;
  std::size_t message_length = 32;
  bool outlier_filter = false;  // drop sessions > 3 MAD from the median
};

struct OpStats {
  double mean = 0.0;
  double std_dev = 0.0;  // n-1 denominator; 0 when n < 2
};

// Aggregates over the successful sessions of one cell; success_rate is
// over all sessions.
struct CellResult {
  std::string algorithm;
  AlgoKind kind = AlgoKind::kem;
  int security_level = 0;
  std::string config;
  std::size_t n_iterations = 0;
  std::size_t n_success = 0;
  double success_rate = 0.0;
  OpStats keygen, op2, op3, overhead;
  double crypto_only_mean = 0.0;
  double bytes_on_wire_mean = 0.0;
};

struct CampaignResult {
  std::vector<CellResult> cells;  // algorithm-major, spec order
  std::vector<std::string> session_lines;  // per-session CSV, same order
  bool aborted = false;  // progress callback stopped the run early
};

// Sub-seed for one session, mixed from the campaign seed and the cell
// coordinates so cells and iterations are independent streams and any
// single session can be replayed in isolation.
std::uint64_t session_seed_for(std::uint64_t master_seed,
                               const std::string& algorithm,
                               const std::string& config,
                               std::size_t iteration);

OpStats aggregate(const std::vector<double>& xs);
std::vector<double> mad_filter(const std::vector<double>& xs);

struct CampaignOptions {
  unsigned jobs = 1;  // worker threads; cells are the parallel unit
  // Called after each finished cell with (done, total); may come from any
  // worker but never concurrently. Returning false stops the campaign
  // after the cells already in flight.
  std::function<bool(std::size_t, std::size_t)> progress;
  bool keep_session_lines = true;
};

// Runs the full grid. Deterministic in (spec, profiles) regardless of
// jobs. Throws out_of_range for an unknown algorithm or config name and
// invalid_argument for a profile with no usable timing model.
CampaignResult run_campaign(const CampaignSpec& spec,
                            const ProfileSet& profiles,
                            const CampaignOptions& opts = {});

// Mean overhead ratio between two configs of one algorithm, low / high.
// Wire-bound handshakes track the bit-rate ratio.
double scaling_check(const CampaignResult& result,
                     const std::string& algorithm,
                     const std::string& config_slow,
                     const std::string& config_fast);

}  // namespace pqcan
