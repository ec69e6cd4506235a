#include "pqcan/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "pqcan/backend.hpp"
#include "pqcan/bus.hpp"

namespace pqcan {

std::uint64_t session_seed_for(std::uint64_t master_seed,
                               const std::string& algorithm,
                               const std::string& config,
                               std::size_t iteration) {
  std::uint64_t s = mix_seed(master_seed, hash64(algorithm));
  s = mix_seed(s, hash64(config));
  return mix_seed(s, iteration);
}

OpStats aggregate(const std::vector<double>& xs) {
  OpStats s;
  if (xs.empty()) return s;
  double sum = 0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() >= 2) {
    double sq = 0;
    for (double x : xs) sq += (x - s.mean) * (x - s.mean);
    s.std_dev = std::sqrt(sq / static_cast<double>(xs.size() - 1));
  }
  return s;
}

std::vector<double> mad_filter(const std::vector<double>& xs) {
  if (xs.size() < 3) return xs;
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  auto median_of = [](const std::vector<double>& v) {
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  double med = median_of(sorted);
  std::vector<double> dev(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) dev[i] = std::abs(xs[i] - med);
  std::sort(dev.begin(), dev.end());
  double mad = median_of(dev);
  std::vector<double> kept;
  for (double x : xs) {
    if (std::abs(x - med) <= 3.0 * mad) kept.push_back(x);
  }
  return kept;
}

namespace {

struct Cell {
  const AlgorithmProfile* profile = nullptr;
  const EcuConfig* config = nullptr;
};

struct CellOutput {
  CellResult result;
  std::string session_lines;
  bool finished = false;
};

CellResult run_cell(const CampaignSpec& spec, const Cell& cell,
                    bool keep_lines, std::string& lines_out) {
  const AlgorithmProfile& profile = *cell.profile;
  const EcuConfig& ecu = *cell.config;

  SessionConfig scfg;
  scfg.receiver_timeout = spec.receiver_timeout;
  scfg.start_jitter = spec.start_jitter;
  scfg.message_length = spec.message_length;
  scfg.compute_model = profile.has_table_for(ecu.name)
                           ? ComputeModelKind::table_driven
                           : ComputeModelKind::cycle_based;

  auto backend = make_mock_backend(profile);

  std::vector<double> keygen, op2, op3, overhead, crypto_only, wire;
  std::size_t n_success = 0;

  for (std::size_t i = 0; i < spec.n_iterations; ++i) {
    std::uint64_t seed = session_seed_for(spec.master_seed, profile.name, ecu.name, i);
    CanBus bus(ecu.bit_rate, spec.stuffing, mix_seed(seed, hash64("bus")));
    bus.set_trace_recording(false);
    if (spec.background_load > 0.0) {
      TrafficGenConfig traffic;
      traffic.target_load = spec.background_load;
      traffic.seed = mix_seed(seed, hash64("traffic"));
      bus.attach_traffic_generator(traffic);
    }
    SessionResult r = run_session(bus, scfg, profile, *backend, ecu, seed);
    if (keep_lines) {
      lines_out += session_csv_line(profile.name, ecu.name, seed, r);
      lines_out += '\n';
    }
    if (r.success) {
      ++n_success;
      keygen.push_back(r.keygen_ms);
      op2.push_back(r.op2_ms);
      op3.push_back(r.op3_ms);
      overhead.push_back(r.overhead_ms);
      crypto_only.push_back(r.crypto_only_ms);
      wire.push_back(static_cast<double>(r.bytes_on_wire));
    }
  }

  if (spec.outlier_filter && overhead.size() >= 3) {
    // Sessions whose overhead sits more than 3 MAD from the cell median
    // drop out of every aggregate.
    auto median_of = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      std::size_t n = v.size();
      return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    };
    double med = median_of(overhead);
    std::vector<double> dev(overhead.size());
    for (std::size_t i = 0; i < overhead.size(); ++i)
      dev[i] = std::abs(overhead[i] - med);
    double mad = median_of(dev);
    std::vector<double> k2, o2v, o3v, ov, co, wi;
    for (std::size_t i = 0; i < overhead.size(); ++i) {
      if (dev[i] > 3.0 * mad) continue;
      k2.push_back(keygen[i]);
      o2v.push_back(op2[i]);
      o3v.push_back(op3[i]);
      ov.push_back(overhead[i]);
      co.push_back(crypto_only[i]);
      wi.push_back(wire[i]);
    }
    keygen = k2; op2 = o2v; op3 = o3v; overhead = ov; crypto_only = co; wire = wi;
  }

  CellResult out;
  out.algorithm = profile.name;
  out.kind = profile.kind;
  out.security_level = profile.security_level;
  out.config = ecu.name;
  out.n_iterations = spec.n_iterations;
  out.n_success = n_success;
  out.success_rate = spec.n_iterations == 0
                         ? 0.0
                         : static_cast<double>(n_success) /
                               static_cast<double>(spec.n_iterations);
  out.keygen = aggregate(keygen);
  out.op2 = aggregate(op2);
  out.op3 = aggregate(op3);
  out.overhead = aggregate(overhead);
  out.crypto_only_mean = aggregate(crypto_only).mean;
  out.bytes_on_wire_mean = aggregate(wire).mean;
  return out;
}

void validate_cell(const AlgorithmProfile& profile, const EcuConfig& ecu) {
  bool cycles_ok = true;
  for (CryptoOp op : ops_for(profile.kind)) {
    cycles_ok = cycles_ok && profile.compute.cycles.count(op);
  }
  if (!profile.has_table_for(ecu.name) && !cycles_ok) {
    throw std::invalid_argument("profile '" + profile.name +
                                "' has no timing model for config '" + ecu.name +
                                "'");
  }
}

}  // namespace

CampaignResult run_campaign(const CampaignSpec& spec, const ProfileSet& profiles,
                            const CampaignOptions& opts) {
  if (spec.n_iterations == 0) throw std::invalid_argument("iterations must be >= 1");
  if (spec.configs.empty()) throw std::invalid_argument("no ECU configs given");
  if (spec.algorithms.empty()) throw std::invalid_argument("no algorithms given");

  std::vector<Cell> cells;
  for (const std::string& name : spec.algorithms) {
    const AlgorithmProfile& profile = profiles.at(name);  // throws on unknown
    for (const EcuConfig& ecu : spec.configs) {
      if (ecu.cpu_hz == 0 || ecu.bit_rate.bits_per_second == 0) {
        throw std::invalid_argument("config '" + ecu.name + "' needs a clock and a bit rate");
      }
      validate_cell(profile, ecu);
      cells.push_back(Cell{&profile, &ecu});
    }
  }

  std::vector<CellOutput> outputs(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex progress_mutex;
  std::size_t done = 0;

  auto worker = [&]() {
    for (;;) {
      if (stop.load(std::memory_order_relaxed)) return;
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      CellOutput& out = outputs[i];
      out.result = run_cell(spec, cells[i], opts.keep_session_lines,
                            out.session_lines);
      out.finished = true;
      std::lock_guard<std::mutex> lock(progress_mutex);
      ++done;
      if (opts.progress && !opts.progress(done, cells.size())) {
        stop.store(true, std::memory_order_relaxed);
      }
    }
  };

  unsigned jobs = std::max(1u, opts.jobs);
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, cells.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  CampaignResult result;
  result.aborted = stop.load();
  for (CellOutput& out : outputs) {
    if (!out.finished) continue;
    result.cells.push_back(std::move(out.result));
    if (opts.keep_session_lines && !out.session_lines.empty()) {
      result.session_lines.push_back(std::move(out.session_lines));
    }
  }
  return result;
}

double scaling_check(const CampaignResult& result, const std::string& algorithm,
                     const std::string& config_slow,
                     const std::string& config_fast) {
  const CellResult* slow = nullptr;
  const CellResult* fast = nullptr;
  for (const CellResult& c : result.cells) {
    if (c.algorithm != algorithm) continue;
    if (c.config == config_slow) slow = &c;
    if (c.config == config_fast) fast = &c;
  }
  if (!slow || !fast) {
    throw std::out_of_range("campaign has no cells for '" + algorithm + "' at '" +
                            config_slow + "' and '" + config_fast + "'");
  }
  if (fast->overhead.mean == 0.0) {
    throw std::out_of_range("zero overhead in the fast cell, no ratio");
  }
  return slow->overhead.mean / fast->overhead.mean;
}

}  // namespace pqcan
