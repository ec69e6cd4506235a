#include "pqcan/runconfig.hpp"

#include <algorithm>
#include <cmath>

namespace pqcan {

namespace {

EcuConfig* find_config(std::vector<EcuConfig>& configs, std::string_view name) {
  for (EcuConfig& c : configs) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

// Custom ECU definitions collected from [ecu.<name>] sections; a name that
// matches a preset starts from the preset's values.
EcuConfig& custom_config(std::vector<EcuConfig>& customs, const std::string& name) {
  if (EcuConfig* c = find_config(customs, name)) return *c;
  EcuConfig fresh;
  fresh.name = name;
  try {
    fresh = ecu_preset(name);
  } catch (const std::out_of_range&) {
  }
  customs.push_back(fresh);
  return customs.back();
}

void apply_ecu_key(const KvFile& f, const KvEntry& e, EcuConfig& ecu) {
  if (e.key == "cpu_mhz") {
    double mhz = kv_double(f, e);
    if (!(mhz > 0)) throw ParseError(f.origin, e.line, "cpu_mhz must be > 0");
    ecu.cpu_hz = static_cast<std::uint64_t>(std::llround(mhz * 1e6));
  } else if (e.key == "bit_rate") {
    long long v = kv_int(f, e);
    if (v <= 0) throw ParseError(f.origin, e.line, "bit_rate must be > 0");
    ecu.bit_rate = BitRate{static_cast<std::uint32_t>(v)};
  } else {
    throw ParseError(f.origin, e.line, "unknown key '" + e.key + "' in ECU section");
  }
}

void apply_campaign_key(const KvFile& f, const KvEntry& e, RunConfig& rc,
                        std::vector<std::string>& config_names) {
  CampaignSpec& spec = rc.spec;
  if (e.key == "algorithms") {
    if (e.value == "all") {
      rc.algorithms_all = true;
      spec.algorithms.clear();
    } else {
      rc.algorithms_all = false;
      spec.algorithms = kv_list(e);
      if (spec.algorithms.empty()) {
        throw ParseError(f.origin, e.line, "empty algorithm list");
      }
    }
  } else if (e.key == "configs") {
    config_names = kv_list(e);
    if (config_names.empty()) throw ParseError(f.origin, e.line, "empty config list");
  } else if (e.key == "iterations") {
    long long v = kv_int(f, e);
    if (v < 1) throw ParseError(f.origin, e.line, "iterations must be >= 1");
    spec.n_iterations = static_cast<std::size_t>(v);
  } else if (e.key == "seed") {
    unsigned long long v = 0;
    try {
      v = std::stoull(e.value);
    } catch (...) {
      throw ParseError(f.origin, e.line, "expected seed, got '" + e.value + "'");
    }
    spec.master_seed = v;
  } else if (e.key == "stuffing") {
    try {
      spec.stuffing = StuffingModel::parse(e.value);
    } catch (const std::invalid_argument& ex) {
      throw ParseError(f.origin, e.line, ex.what());
    }
  } else if (e.key == "timeout_ms") {
    double v = kv_double(f, e);
    if (v < 0) throw ParseError(f.origin, e.line, "timeout_ms must be >= 0");
    spec.receiver_timeout = ms_to_ns(v);
  } else if (e.key == "start_jitter_ms") {
    double v = kv_double(f, e);
    if (v < 0) throw ParseError(f.origin, e.line, "start_jitter_ms must be >= 0");
    spec.start_jitter = ms_to_ns(v);
  } else if (e.key == "load") {
    double v = kv_double(f, e);
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ParseError(f.origin, e.line, "load must be in [0, 1]");
    }
    spec.background_load = v;
  } else if (e.key == "message_length") {
    long long v = kv_int(f, e);
    if (v < 0) throw ParseError(f.origin, e.line, "message_length must be >= 0");
    spec.message_length = static_cast<std::size_t>(v);
  } else if (e.key == "outlier_filter") {
    spec.outlier_filter = kv_bool(f, e);
  } else {
    throw ParseError(f.origin, e.line, "unknown key '" + e.key + "' in [campaign]");
  }
}

std::vector<EcuConfig> resolve_configs(const KvFile& f, int line,
                                       const std::vector<std::string>& names,
                                       std::vector<EcuConfig>& customs) {
  std::vector<EcuConfig> out;
  for (const std::string& name : names) {
    if (EcuConfig* c = find_config(customs, name)) {
      out.push_back(*c);
      continue;
    }
    try {
      out.push_back(ecu_preset(name));
    } catch (const std::out_of_range&) {
      throw ParseError(f.origin, line, "unknown ECU config '" + name + "'");
    }
  }
  return out;
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  KvFile f = KvFile::parse_file(path);
  RunConfig rc;
  rc.apply(f);
  return rc;
}

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
  KvFile f = KvFile::parse_string(text, origin);
  RunConfig rc;
  rc.apply(f);
  return rc;
}

void RunConfig::apply(const KvFile& f) {
  std::vector<std::string> config_names = {"high", "mid", "low"};
  std::vector<EcuConfig> customs;
  int configs_line = 0;

  for (const KvEntry& e : f.entries) {
    if (e.section == "campaign") {
      if (e.key == "configs") configs_line = e.line;
      apply_campaign_key(f, e, *this, config_names);
    } else if (e.section.starts_with("ecu.")) {
      std::string name = e.section.substr(4);
      if (name.empty()) throw ParseError(f.origin, e.line, "empty ECU name");
      apply_ecu_key(f, e, custom_config(customs, name));
    } else {
      throw ParseError(f.origin, e.line, "unexpected section '" + e.section + "'");
    }
  }
  for (const EcuConfig& c : customs) {
    if (c.cpu_hz == 0 || c.bit_rate.bits_per_second == 0) {
      throw ParseError(f.origin, 0, "ECU '" + c.name + "' needs cpu_mhz and bit_rate");
    }
  }
  spec.configs = resolve_configs(f, configs_line, config_names, customs);
}

void RunConfig::set_key(const std::string& dotted, const std::string& value) {
  const std::string origin = "override";
  std::size_t dot = dotted.find('.');
  if (dot == std::string::npos) {
    throw ParseError(origin, 0, "expected '<section>.<key>', got '" + dotted + "'");
  }
  std::string section = dotted.substr(0, dot);
  std::string key = dotted.substr(dot + 1);
  KvFile f;
  f.origin = origin;

  if (section == "campaign") {
    KvEntry e{section, key, value, 0};
    std::vector<std::string> config_names;
    apply_campaign_key(f, e, *this, config_names);
    if (!config_names.empty()) {
      // Resolve against the currently loaded configs, then the presets.
      spec.configs = resolve_configs(f, 0, config_names, spec.configs);
    }
  } else if (section == "ecu") {
    std::size_t dot2 = key.find('.');
    if (dot2 == std::string::npos) {
      throw ParseError(origin, 0, "expected 'ecu.<name>.<key>'");
    }
    std::string name = key.substr(0, dot2);
    EcuConfig* c = find_config(spec.configs, name);
    if (!c) {
      throw ParseError(origin, 0, "'" + name + "' is not among the selected configs");
    }
    KvEntry e{section, key.substr(dot2 + 1), value, 0};
    apply_ecu_key(f, e, *c);
  } else {
    throw ParseError(origin, 0, "unknown section '" + section + "'");
  }
}

std::vector<std::string> RunConfig::algorithm_list(const ProfileSet& profiles) const {
  if (!algorithms_all) return spec.algorithms;
  std::vector<std::string> out;
  for (const AlgorithmProfile& p : profiles.all()) out.push_back(p.name);
  return out;
}

}  // namespace pqcan
