// Command-line front end. Talks to the simulator only through the C API.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "pqcan.h"

namespace {

constexpr int kExitApiError = 2;
constexpr int kExitPartial = 3;

[[noreturn]] void die(const char* context, pqcan_status s) {
  std::cerr << "pqcan: " << context << ": " << pqcan_last_error()
            << " (status " << static_cast<int>(s) << ")\n";
  std::exit(kExitApiError);
}

void check(const char* context, pqcan_status s) {
  if (s != PQCAN_OK) die(context, s);
}

// Two-call string fetch.
std::string fetch(const char* context,
                  const std::function<pqcan_status(char*, size_t*)>& fn) {
  size_t len = 0;
  check(context, fn(nullptr, &len));
  std::string out(len, '\0');
  check(context, fn(out.data(), &len));
  out.resize(len > 0 ? len - 1 : 0);  // drop the NUL
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "pqcan: cannot open for writing: " << path << "\n";
    std::exit(kExitApiError);
  }
  out << text;
  if (!out.flush()) {
    std::cerr << "pqcan: write failed: " << path << "\n";
    std::exit(kExitApiError);
  }
}

struct ProfileSetHandle {
  pqcan_profile_set* p = nullptr;
  ~ProfileSetHandle() { pqcan_profile_set_free(p); }
};

struct RunConfigHandle {
  pqcan_run_config* p = nullptr;
  ~RunConfigHandle() { pqcan_run_config_free(p); }
};

struct ResultsHandle {
  pqcan_results* p = nullptr;
  ~ResultsHandle() { pqcan_results_free(p); }
};

int progress_to_stderr(size_t done, size_t total, void*) {
  std::fprintf(stderr, "\rcells %zu/%zu", done, total);
  if (done == total) std::fputc('\n', stderr);
  std::fflush(stderr);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic CAN bus simulator for post-quantum handshakes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pqcan_version());

  std::string profiles_path = "data/profiles.txt";
  std::string config_path;
  std::string out_dir = ".";
  std::string seed_override;
  std::vector<std::string> overrides;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  bool quiet = false;

  CLI::App* run = app.add_subcommand("run", "Run a measurement campaign");
  run->add_option("--config", config_path, "Campaign config file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--profiles", profiles_path, "Algorithm profile file")
      ->envname("PQCAN_PROFILES");
  run->add_option("--jobs", jobs, "Worker threads (cells run in parallel)");
  run->add_option("--seed", seed_override, "Override campaign.seed")
      ->envname("PQCAN_SEED");
  run->add_option("--set", overrides,
                  "Config override as <section>.<key>=<value>, repeatable");
  run->add_option("--out", out_dir, "Directory for results files");
  run->add_flag("--quiet", quiet, "No progress output");

  std::string report_input;
  std::string report_format = "markdown";
  std::string report_out;
  CLI::App* report = app.add_subcommand("report", "Render a results CSV");
  report->add_option("--input", report_input, "results.csv from a run")
      ->required()
      ->check(CLI::ExistingFile);
  report->add_option("--format", report_format, "csv, markdown or both")
      ->check(CLI::IsMember({"csv", "markdown", "both"}));
  report->add_option("--out", report_out,
                     "Directory for rendered files (default: stdout)");

  std::string list_profiles_path = "data/profiles.txt";
  CLI::App* list =
      app.add_subcommand("list-algorithms", "Print the loaded profiles");
  list->add_option("--profiles", list_profiles_path, "Algorithm profile file")
      ->envname("PQCAN_PROFILES");

  std::string validate_path;
  CLI::App* validate =
      app.add_subcommand("validate-config", "Parse a config file and report");
  validate->add_option("--config", validate_path, "Campaign config file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    ProfileSetHandle profiles;
    check("loading profiles",
          pqcan_profile_set_load(profiles_path.c_str(), &profiles.p));
    RunConfigHandle cfg;
    check("loading config", pqcan_run_config_load(config_path.c_str(), &cfg.p));
    if (!seed_override.empty()) {
      check("applying --seed",
            pqcan_run_config_set(cfg.p, "campaign.seed", seed_override.c_str()));
    }
    for (const std::string& kv : overrides) {
      size_t eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "pqcan: --set expects <section>.<key>=<value>, got '" << kv
                  << "'\n";
        return kExitApiError;
      }
      check("applying --set",
            pqcan_run_config_set(cfg.p, kv.substr(0, eq).c_str(),
                                 kv.substr(eq + 1).c_str()));
    }

    ResultsHandle results;
    pqcan_status s = pqcan_campaign_run(cfg.p, profiles.p, jobs,
                                        quiet ? nullptr : progress_to_stderr,
                                        nullptr, &results.p);
    if (s != PQCAN_OK && s != PQCAN_ERR_PARTIAL) die("running campaign", s);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      std::cerr << "pqcan: cannot create " << out_dir << ": " << ec.message()
                << "\n";
      return kExitApiError;
    }

    std::string csv_path = out_dir + "/results.csv";
    std::string md_path = out_dir + "/results.md";
    std::string sessions_path = out_dir + "/sessions.csv";
    check("writing results.csv",
          pqcan_results_write_csv(results.p, csv_path.c_str()));
    check("writing results.md",
          pqcan_results_write_markdown(results.p, md_path.c_str()));
    write_file(sessions_path, fetch("fetching sessions", [&](char* b, size_t* n) {
                 return pqcan_results_sessions_string(results.p, b, n);
               }));

    size_t rows = 0;
    check("counting rows", pqcan_results_rows(results.p, &rows));
    if (s == PQCAN_ERR_PARTIAL) {
      std::cout << "aborted after " << rows << " cells; partial results in "
                << out_dir << "\n";
      return kExitPartial;
    }
    std::cout << "wrote " << csv_path << ", " << md_path << ", "
              << sessions_path << " (" << rows << " cells)\n";
    return 0;
  }

  if (*report) {
    ResultsHandle results;
    check("loading results",
          pqcan_results_load_csv(report_input.c_str(), &results.p));
    bool want_csv = report_format == "csv" || report_format == "both";
    bool want_md = report_format == "markdown" || report_format == "both";
    if (report_out.empty()) {
      if (want_csv) {
        std::cout << fetch("rendering csv", [&](char* b, size_t* n) {
          return pqcan_results_csv_string(results.p, b, n);
        });
      }
      if (want_md) {
        std::cout << fetch("rendering markdown", [&](char* b, size_t* n) {
          return pqcan_results_markdown_string(results.p, b, n);
        });
      }
    } else {
      std::error_code ec;
      std::filesystem::create_directories(report_out, ec);
      if (ec) {
        std::cerr << "pqcan: cannot create " << report_out << ": "
                  << ec.message() << "\n";
        return kExitApiError;
      }
      if (want_csv) {
        check("writing csv", pqcan_results_write_csv(
                                 results.p, (report_out + "/results.csv").c_str()));
      }
      if (want_md) {
        check("writing markdown",
              pqcan_results_write_markdown(
                  results.p, (report_out + "/results.md").c_str()));
      }
    }
    return 0;
  }

  if (*list) {
    ProfileSetHandle profiles;
    check("loading profiles",
          pqcan_profile_set_load(list_profiles_path.c_str(), &profiles.p));
    size_t count = 0;
    check("counting profiles", pqcan_profile_count(profiles.p, &count));
    for (size_t i = 0; i < count; ++i) {
      std::cout << fetch("reading profile", [&](char* b, size_t* n) {
        return pqcan_profile_line(profiles.p, i, b, n);
      }) << "\n";
    }
    return 0;
  }

  if (*validate) {
    RunConfigHandle cfg;
    pqcan_status s = pqcan_run_config_load(validate_path.c_str(), &cfg.p);
    if (s != PQCAN_OK) {
      std::cerr << "invalid: " << pqcan_last_error() << "\n";
      return kExitApiError;
    }
    std::cout << "ok\n";
    return 0;
  }

  return 0;
}
