#pragma once
#include <string>
#include <vector>

#include "pqcan/campaign.hpp"
#include "pqcan/kvfile.hpp"

namespace pqcan {

// Campaign description loaded from a key=value file. Sections:
//   [campaign]  algorithms (comma list or "all"), configs, iterations,
//               seed, stuffing, timeout_ms, start_jitter_ms, load,
//               message_length, outlier_filter
//   [ecu.NAME]  cpu_mhz, bit_rate  (extra configs beyond the presets)
// Unknown keys are errors; every field has a default so an empty file is
// a valid (if tiny) campaign.
struct RunConfig {
  CampaignSpec spec;
  bool algorithms_all = true;  // expand to every profile at run time

  static RunConfig load(const std::string& path);
  static RunConfig parse(const std::string& text, const std::string& origin);

  // Dotted override, e.g. set_key("campaign.iterations", "500") or
  // set_key("ecu.high.bit_rate", "250000"). Throws ParseError on unknown
  // keys or bad values, same as the file parser.
  void set_key(const std::string& dotted, const std::string& value);

  // Resolves "all" against a profile set, keeping profile order.
  std::vector<std::string> algorithm_list(const ProfileSet& profiles) const;

 private:
  void apply(const KvFile& f);
};

}  // namespace pqcan
