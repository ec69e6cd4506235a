#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pqcan.h"

// Exercises the shared library through the C surface only.

namespace {

std::string data_path(const char* rel) {
  return std::string(PQCAN_SOURCE_DIR) + "/" + rel;
}

using StringFn = pqcan_status (*)(const pqcan_results*, char*, size_t*);

std::string fetch_string(StringFn fn, const pqcan_results* res) {
  size_t len = 0;
  REQUIRE(fn(res, nullptr, &len) == PQCAN_OK);
  REQUIRE(len >= 1);
  std::vector<char> buf(len, '\xff');
  REQUIRE(fn(res, buf.data(), &len) == PQCAN_OK);
  REQUIRE(len == buf.size());
  REQUIRE(buf[len - 1] == '\0');
  return std::string(buf.data());
}

std::string profile_line(const pqcan_profile_set* set, size_t index) {
  size_t len = 0;
  REQUIRE(pqcan_profile_line(set, index, nullptr, &len) == PQCAN_OK);
  std::vector<char> buf(len);
  REQUIRE(pqcan_profile_line(set, index, buf.data(), &len) == PQCAN_OK);
  return std::string(buf.data());
}

constexpr const char* kSmokeSpec =
    "[campaign]\n"
    "algorithms = Kyber512\n"
    "configs = high\n"
    "iterations = 3\n"
    "seed = 5\n";

struct Campaign {
  pqcan_profile_set* profiles = nullptr;
  pqcan_run_config* cfg = nullptr;
  pqcan_results* results = nullptr;

  ~Campaign() {
    pqcan_results_free(results);
    pqcan_run_config_free(cfg);
    pqcan_profile_set_free(profiles);
  }
};

}  // namespace

TEST_CASE("version string and clean initial error state") {
  CHECK(std::strcmp(pqcan_version(), "1.0.0") == 0);
  CHECK(pqcan_last_error() != nullptr);
}

TEST_CASE("profile set loads and exposes summary lines") {
  pqcan_profile_set* set = nullptr;
  REQUIRE(pqcan_profile_set_load(data_path("data/profiles.txt").c_str(), &set) ==
          PQCAN_OK);
  CHECK(std::string(pqcan_last_error()).empty());

  size_t count = 0;
  REQUIRE(pqcan_profile_count(set, &count) == PQCAN_OK);
  CHECK(count == 18);

  CHECK(profile_line(set, 0) == "Kyber512\tkem\t1\t800\t1632\t768");
  CHECK(profile_line(set, 17) == "SPHINCS+-192f (SHAKE)\tdsa\t3\t48\t96\t35664");

  SUBCASE("index past the end reports not-found") {
    size_t len = 0;
    CHECK(pqcan_profile_line(set, 18, nullptr, &len) == PQCAN_ERR_NOT_FOUND);
    CHECK(std::string(pqcan_last_error()) == "index 18 of 18 profiles");
  }

  SUBCASE("undersized buffer reports the required length") {
    char small[4];
    size_t len = sizeof(small);
    CHECK(pqcan_profile_line(set, 0, small, &len) == PQCAN_ERR_BUFFER_TOO_SMALL);
    CHECK(len == 28);
    CHECK(std::string(pqcan_last_error()) == "buffer of 4 bytes, need 28");

    len = 28;
    std::vector<char> exact(len);
    CHECK(pqcan_profile_line(set, 0, exact.data(), &len) == PQCAN_OK);
    CHECK(std::string(exact.data()) == "Kyber512\tkem\t1\t800\t1632\t768");
  }

  pqcan_profile_set_free(set);
}

TEST_CASE("null arguments are rejected") {
  pqcan_profile_set* set = nullptr;
  CHECK(pqcan_profile_set_load(nullptr, &set) == PQCAN_ERR_INVALID_ARG);
  CHECK(std::string(pqcan_last_error()) == "null argument");
  CHECK(pqcan_profile_set_parse(nullptr, "t", &set) == PQCAN_ERR_INVALID_ARG);
  CHECK(pqcan_profile_set_parse("x", "t", nullptr) == PQCAN_ERR_INVALID_ARG);
  CHECK(pqcan_profile_count(nullptr, nullptr) == PQCAN_ERR_INVALID_ARG);

  size_t rows = 0;
  CHECK(pqcan_results_rows(nullptr, &rows) == PQCAN_ERR_INVALID_ARG);
  pqcan_run_config* cfg = nullptr;
  CHECK(pqcan_run_config_load(nullptr, &cfg) == PQCAN_ERR_INVALID_ARG);
  CHECK(pqcan_run_config_set(nullptr, "campaign.seed", "1") ==
        PQCAN_ERR_INVALID_ARG);
}

TEST_CASE("parse failures carry origin-prefixed messages") {
  pqcan_profile_set* set = nullptr;
  REQUIRE(pqcan_profile_set_parse("kind = kem\n", "t", &set) == PQCAN_ERR_PARSE);
  CHECK(std::string(pqcan_last_error()) ==
        "t:1: key outside any [algorithm.<name>] section");
  CHECK(set == nullptr);

  SUBCASE("default origin is <memory>") {
    REQUIRE(pqcan_profile_set_parse("kind = kem\n", nullptr, &set) ==
            PQCAN_ERR_PARSE);
    CHECK(std::string(pqcan_last_error()).rfind("<memory>:1:", 0) == 0);
  }

  SUBCASE("a later success clears the error") {
    REQUIRE(pqcan_profile_set_load(data_path("data/profiles.txt").c_str(),
                                   &set) == PQCAN_OK);
    CHECK(std::string(pqcan_last_error()).empty());
    pqcan_profile_set_free(set);
  }
}

TEST_CASE("run config parse plus key overrides") {
  pqcan_run_config* cfg = nullptr;
  REQUIRE(pqcan_run_config_parse(kSmokeSpec, "smoke", &cfg) == PQCAN_OK);

  CHECK(pqcan_run_config_set(cfg, "campaign.seed", "99") == PQCAN_OK);
  CHECK(pqcan_run_config_set(cfg, "campaign.iterations", "2") == PQCAN_OK);

  CHECK(pqcan_run_config_set(cfg, "bogus", "1") == PQCAN_ERR_PARSE);
  CHECK(std::string(pqcan_last_error()) ==
        "override:0: expected '<section>.<key>', got 'bogus'");

  CHECK(pqcan_run_config_set(cfg, "campaign.warp", "1") == PQCAN_ERR_PARSE);

  pqcan_run_config_free(cfg);
}

TEST_CASE("campaign run end to end") {
  Campaign c;
  REQUIRE(pqcan_profile_set_load(data_path("data/profiles.txt").c_str(),
                                 &c.profiles) == PQCAN_OK);
  REQUIRE(pqcan_run_config_parse(kSmokeSpec, "smoke", &c.cfg) == PQCAN_OK);
  REQUIRE(pqcan_campaign_run(c.cfg, c.profiles, 0, nullptr, nullptr,
                             &c.results) == PQCAN_OK);

  size_t rows = 0;
  REQUIRE(pqcan_results_rows(c.results, &rows) == PQCAN_OK);
  CHECK(rows == 1);

  std::string csv = fetch_string(&pqcan_results_csv_string, c.results);
  CHECK(csv.rfind("algorithm,kind,config,", 0) == 0);
  CHECK(csv.find("Kyber512,kem,high,1,3,") != std::string::npos);

  std::string md = fetch_string(&pqcan_results_markdown_string, c.results);
  CHECK(md.rfind("# Handshake measurements", 0) == 0);
  CHECK(md.find("## Key exchange") != std::string::npos);

  std::string sessions = fetch_string(&pqcan_results_sessions_string, c.results);
  CHECK(sessions.rfind("algorithm,config,seed,success,", 0) == 0);
  // header plus one line per iteration
  size_t newlines = 0;
  for (char ch : sessions) newlines += ch == '\n';
  CHECK(newlines == 4);

  SUBCASE("csv writes to disk and loads back") {
    auto dir = std::filesystem::temp_directory_path();
    std::string path = (dir / "pqcan_capi_results.csv").string();
    REQUIRE(pqcan_results_write_csv(c.results, path.c_str()) == PQCAN_OK);
    REQUIRE(pqcan_results_write_markdown(
                c.results, (dir / "pqcan_capi_results.md").string().c_str()) ==
            PQCAN_OK);

    pqcan_results* loaded = nullptr;
    REQUIRE(pqcan_results_load_csv(path.c_str(), &loaded) == PQCAN_OK);
    size_t loaded_rows = 0;
    REQUIRE(pqcan_results_rows(loaded, &loaded_rows) == PQCAN_OK);
    CHECK(loaded_rows == rows);
    CHECK(fetch_string(&pqcan_results_csv_string, loaded) == csv);

    // a loaded file has no per-session log
    CHECK(fetch_string(&pqcan_results_sessions_string, loaded).empty());
    pqcan_results_free(loaded);
  }

  SUBCASE("write to an unopenable path reports io") {
    CHECK(pqcan_results_write_csv(c.results, "/nonexistent-dir/x.csv") ==
          PQCAN_ERR_IO);
    CHECK(std::string(pqcan_last_error())
              .rfind("cannot open for writing:", 0) == 0);
  }
}

TEST_CASE("unknown algorithm surfaces as not-found") {
  Campaign c;
  REQUIRE(pqcan_profile_set_load(data_path("data/profiles.txt").c_str(),
                                 &c.profiles) == PQCAN_OK);
  REQUIRE(pqcan_run_config_parse(
              "[campaign]\nalgorithms = Vaporware\nconfigs = high\n"
              "iterations = 1\nseed = 1\n",
              "bad", &c.cfg) == PQCAN_OK);
  CHECK(pqcan_campaign_run(c.cfg, c.profiles, 1, nullptr, nullptr,
                           &c.results) == PQCAN_ERR_NOT_FOUND);
  CHECK(c.results == nullptr);
  CHECK(std::string(pqcan_last_error()).find("Vaporware") != std::string::npos);
}

namespace {

int count_and_continue(size_t done, size_t total, void* user) {
  auto* calls = static_cast<std::vector<std::pair<size_t, size_t>>*>(user);
  calls->emplace_back(done, total);
  return 0;
}

int stop_immediately(size_t, size_t, void*) { return 1; }

}  // namespace

TEST_CASE("progress callback observes every cell and can abort") {
  Campaign c;
  REQUIRE(pqcan_profile_set_load(data_path("data/profiles.txt").c_str(),
                                 &c.profiles) == PQCAN_OK);
  const char* spec =
      "[campaign]\n"
      "algorithms = Kyber512\n"
      "configs = high, low\n"
      "iterations = 2\n"
      "seed = 3\n";
  REQUIRE(pqcan_run_config_parse(spec, "grid", &c.cfg) == PQCAN_OK);

  SUBCASE("full run reports cumulative progress") {
    std::vector<std::pair<size_t, size_t>> calls;
    REQUIRE(pqcan_campaign_run(c.cfg, c.profiles, 1, &count_and_continue,
                               &calls, &c.results) == PQCAN_OK);
    REQUIRE(calls.size() == 2);
    CHECK(calls[0] == std::pair<size_t, size_t>{1, 2});
    CHECK(calls[1] == std::pair<size_t, size_t>{2, 2});
  }

  SUBCASE("nonzero return stops after the finished cell") {
    REQUIRE(pqcan_campaign_run(c.cfg, c.profiles, 1, &stop_immediately, nullptr,
                               &c.results) == PQCAN_ERR_PARTIAL);
    CHECK(std::string(pqcan_last_error()) ==
          "campaign stopped by progress callback");
    REQUIRE(c.results != nullptr);
    size_t rows = 0;
    REQUIRE(pqcan_results_rows(c.results, &rows) == PQCAN_OK);
    CHECK(rows == 1);
    std::string csv = fetch_string(&pqcan_results_csv_string, c.results);
    CHECK(csv.find("Kyber512,kem,high,") != std::string::npos);
    CHECK(csv.find(",low,") == std::string::npos);
  }
}

TEST_CASE("frees accept null") {
  pqcan_profile_set_free(nullptr);
  pqcan_run_config_free(nullptr);
  pqcan_results_free(nullptr);
}
