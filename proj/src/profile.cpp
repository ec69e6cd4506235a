#include "pqcan/profile.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <stdexcept>

#include "pqcan/kvfile.hpp"

namespace pqcan {

std::string_view to_string(AlgoKind kind) {
  return kind == AlgoKind::kem ? "kem" : "dsa";
}

std::string_view to_string(CryptoOp op) {
  switch (op) {
    case CryptoOp::keygen: return "keygen";
    case CryptoOp::encapsulation: return "encapsulation";
    case CryptoOp::decapsulation: return "decapsulation";
    case CryptoOp::signing: return "signing";
    case CryptoOp::verification: return "verification";
  }
  return "?";
}

std::array<CryptoOp, 3> ops_for(AlgoKind kind) {
  if (kind == AlgoKind::kem) {
    return {CryptoOp::keygen, CryptoOp::encapsulation, CryptoOp::decapsulation};
  }
  return {CryptoOp::keygen, CryptoOp::signing, CryptoOp::verification};
}

std::vector<EcuConfig> default_ecu_configs() {
  return {
      {"high", 300'000'000, rates::k1M},
      {"mid", 200'000'000, rates::k500k},
      {"low", 120'000'000, rates::k125k},
  };
}

const EcuConfig& ecu_preset(std::string_view name) {
  static const std::vector<EcuConfig> presets = default_ecu_configs();
  for (const EcuConfig& c : presets) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("unknown ECU preset '" + std::string(name) + "'");
}

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// E[max(0, N(mu, sigma))].
double clamped_mean(double mu, double sigma) {
  double t = mu / sigma;
  return mu * normal_cdf(t) + sigma * normal_pdf(t);
}

// Pre-clamp mean mu such that a normal(mu, sigma) draw clamped at zero has
// expectation `target`. Clamping alone would bias slow-tail cells high, so
// the sampler shifts the center down instead; clamped_mean is strictly
// increasing in mu, solved by bisection.
double solve_sampling_mean(double target, double sigma) {
  if (sigma <= 0.0 || target <= 0.0) return target;
  double hi = target;  // clamped_mean(target) > target always
  double lo = target - sigma;
  while (clamped_mean(lo, sigma) > target) lo -= sigma;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++i) {
    double mid = 0.5 * (lo + hi);
    if (clamped_mean(mid, sigma) > target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<CryptoOp> parse_op(std::string_view s) {
  for (CryptoOp op : {CryptoOp::keygen, CryptoOp::encapsulation,
                      CryptoOp::decapsulation, CryptoOp::signing,
                      CryptoOp::verification}) {
    if (s == to_string(op)) return op;
  }
  return std::nullopt;
}

struct ProfileBuilder {
  AlgorithmProfile p;
  int first_line = 0;
  bool has_kind = false, has_level = false, has_pk = false, has_sk = false;
  bool has_ct = false, has_ss = false, has_sig = false;
  std::set<std::string> seen_keys;
};

std::size_t parse_size(const KvFile& f, const KvEntry& e) {
  long long v = kv_int(f, e);
  if (v < 0) throw ParseError(f.origin, e.line, "'" + e.key + "' must be >= 0");
  return static_cast<std::size_t>(v);
}

void apply_key(const KvFile& f, const KvEntry& e, ProfileBuilder& b) {
  if (!b.seen_keys.insert(e.key).second) {
    throw ParseError(f.origin, e.line, "duplicate key '" + e.key + "'");
  }
  if (e.key == "kind") {
    if (e.value == "kem") {
      b.p.kind = AlgoKind::kem;
    } else if (e.value == "dsa") {
      b.p.kind = AlgoKind::dsa;
    } else {
      throw ParseError(f.origin, e.line, "kind must be 'kem' or 'dsa', got '" + e.value + "'");
    }
    b.has_kind = true;
  } else if (e.key == "security_level") {
    long long v = kv_int(f, e);
    if (v < 1 || v > 5) throw ParseError(f.origin, e.line, "security_level must be in [1, 5]");
    b.p.security_level = static_cast<int>(v);
    b.has_level = true;
  } else if (e.key == "public_key_bytes") {
    b.p.public_key_bytes = parse_size(f, e);
    b.has_pk = true;
  } else if (e.key == "secret_key_bytes") {
    b.p.secret_key_bytes = parse_size(f, e);
    b.has_sk = true;
  } else if (e.key == "ciphertext_bytes") {
    b.p.ciphertext_bytes = parse_size(f, e);
    b.has_ct = true;
  } else if (e.key == "shared_secret_bytes") {
    b.p.shared_secret_bytes = parse_size(f, e);
    b.has_ss = true;
  } else if (e.key == "signature_bytes") {
    b.p.signature_bytes = parse_size(f, e);
    b.has_sig = true;
  } else if (e.key.starts_with("timing.")) {
    std::string_view rest = std::string_view(e.key).substr(7);
    std::size_t dot = rest.rfind('.');
    if (dot == std::string_view::npos || dot == 0) {
      throw ParseError(f.origin, e.line, "expected timing.<config>.<op>");
    }
    std::string config(rest.substr(0, dot));
    auto op = parse_op(rest.substr(dot + 1));
    if (!op) {
      throw ParseError(f.origin, e.line,
                       "unknown op '" + std::string(rest.substr(dot + 1)) + "'");
    }
    double mean = 0, std_dev = 0;
    if (std::sscanf(e.value.c_str(), "%lf %lf", &mean, &std_dev) != 2 ||
        mean < 0 || std_dev < 0) {
      throw ParseError(f.origin, e.line,
                       "expected '<mean_ms> <std_ms>' with both >= 0, got '" + e.value + "'");
    }
    if (std_dev > 0 && mean <= 0) {
      throw ParseError(f.origin, e.line, "a spread needs a positive mean");
    }
    OpTiming t{mean, std_dev, solve_sampling_mean(mean, std_dev)};
    b.p.compute.table[config][*op] = t;
  } else if (e.key.starts_with("cycles.")) {
    auto op = parse_op(std::string_view(e.key).substr(7));
    if (!op) {
      throw ParseError(f.origin, e.line, "unknown op '" + e.key.substr(7) + "'");
    }
    long long v = kv_int(f, e);
    if (v < 0) throw ParseError(f.origin, e.line, "cycle count must be >= 0");
    b.p.compute.cycles[*op] = static_cast<std::uint64_t>(v);
  } else {
    throw ParseError(f.origin, e.line, "unknown key '" + e.key + "'");
  }
}

AlgorithmProfile finish(const KvFile& f, ProfileBuilder& b) {
  auto require = [&](bool ok, const char* what) {
    if (!ok) {
      throw ParseError(f.origin, b.first_line,
                       "profile '" + b.p.name + "' is missing " + what);
    }
  };
  require(b.has_kind, "'kind'");
  require(b.has_level, "'security_level'");
  require(b.has_pk, "'public_key_bytes'");
  require(b.has_sk, "'secret_key_bytes'");
  if (b.p.kind == AlgoKind::kem) {
    require(b.has_ct, "'ciphertext_bytes'");
    require(b.has_ss, "'shared_secret_bytes'");
    if (b.has_sig) {
      throw ParseError(f.origin, b.first_line,
                       "'signature_bytes' does not apply to a kem profile");
    }
  } else {
    require(b.has_sig, "'signature_bytes'");
    if (b.has_ct || b.has_ss) {
      throw ParseError(f.origin, b.first_line,
                       "ciphertext/shared-secret sizes do not apply to a dsa profile");
    }
  }
  for (const auto& [config, ops] : b.p.compute.table) {
    for (CryptoOp op : ops_for(b.p.kind)) {
      if (!ops.count(op)) {
        throw ParseError(f.origin, b.first_line,
                         "profile '" + b.p.name + "' config '" + config +
                             "' lacks a timing for " + std::string(to_string(op)));
      }
    }
    for (const auto& [op, t] : ops) {
      bool valid = false;
      for (CryptoOp want : ops_for(b.p.kind)) valid = valid || want == op;
      if (!valid) {
        throw ParseError(f.origin, b.first_line,
                         "op " + std::string(to_string(op)) + " does not apply to a " +
                             std::string(to_string(b.p.kind)) + " profile");
      }
    }
  }
  return std::move(b.p);
}

}  // namespace

bool AlgorithmProfile::has_table_for(std::string_view config) const {
  return compute.table.find(config) != compute.table.end();
}

const OpTiming& AlgorithmProfile::table_timing(CryptoOp op,
                                               std::string_view config) const {
  auto it = compute.table.find(config);
  if (it == compute.table.end()) {
    throw std::out_of_range("profile '" + name + "' has no timings for config '" +
                            std::string(config) + "'");
  }
  auto op_it = it->second.find(op);
  if (op_it == it->second.end()) {
    throw std::out_of_range("profile '" + name + "' has no timing for " +
                            std::string(to_string(op)) + " on config '" +
                            std::string(config) + "'");
  }
  return op_it->second;
}

namespace {

std::vector<AlgorithmProfile> build_profiles(const KvFile& f) {
  std::vector<AlgorithmProfile> profiles;
  std::optional<ProfileBuilder> current;
  std::string current_section;
  std::set<std::string> names;

  auto flush = [&]() {
    if (!current) return;
    profiles.push_back(finish(f, *current));
    current.reset();
  };

  for (const KvEntry& e : f.entries) {
    if (e.section != current_section) {
      flush();
      current_section = e.section;
      constexpr std::string_view prefix = "algorithm.";
      if (!std::string_view(e.section).starts_with(prefix)) {
        throw ParseError(f.origin, e.line,
                         "unexpected section '" + e.section +
                             "', profiles live under [algorithm.<name>]");
      }
      std::string name = e.section.substr(prefix.size());
      if (name.empty()) throw ParseError(f.origin, e.line, "empty algorithm name");
      if (!names.insert(name).second) {
        throw ParseError(f.origin, e.line, "duplicate algorithm '" + name + "'");
      }
      current.emplace();
      current->p.name = name;
      current->first_line = e.line;
    }
    if (!current) {
      throw ParseError(f.origin, e.line, "key outside any [algorithm.<name>] section");
    }
    apply_key(f, e, *current);
  }
  flush();
  return profiles;
}

}  // namespace

ProfileSet ProfileSet::load(const std::string& path) {
  KvFile f = KvFile::parse_file(path);
  ProfileSet out;
  out.profiles_ = build_profiles(f);
  return out;
}

ProfileSet ProfileSet::parse(std::string_view text, std::string_view origin) {
  KvFile f = KvFile::parse_string(text, origin);
  ProfileSet out;
  out.profiles_ = build_profiles(f);
  return out;
}

const AlgorithmProfile* ProfileSet::find(std::string_view name) const {
  for (const AlgorithmProfile& p : profiles_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const AlgorithmProfile& ProfileSet::at(std::string_view name) const {
  const AlgorithmProfile* p = find(name);
  if (!p) throw std::out_of_range("unknown algorithm '" + std::string(name) + "'");
  return *p;
}

DurationNs sample_op_time(const AlgorithmProfile& profile, CryptoOp op,
                          const EcuConfig& config, ComputeModelKind model,
                          Rng& rng) {
  if (model == ComputeModelKind::cycle_based) {
    auto it = profile.compute.cycles.find(op);
    if (it == profile.compute.cycles.end()) {
      throw std::out_of_range("profile '" + profile.name + "' has no cycle count for " +
                              std::string(to_string(op)));
    }
    if (config.cpu_hz == 0) throw std::out_of_range("config '" + config.name + "' has no clock");
    unsigned __int128 scaled = static_cast<unsigned __int128>(it->second) * kNsPerSec;
    return static_cast<DurationNs>((scaled + config.cpu_hz / 2) / config.cpu_hz);
  }
  const OpTiming& t = profile.table_timing(op, config.name);
  double ms = rng.normal(t.sampling_mean_ms, t.std_ms);
  return ms_to_ns(ms);  // clamps at zero
}

}  // namespace pqcan
