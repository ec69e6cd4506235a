#include "pqcan.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "pqcan/campaign.hpp"
#include "pqcan/kvfile.hpp"
#include "pqcan/profile.hpp"
#include "pqcan/report.hpp"
#include "pqcan/runconfig.hpp"
#include "pqcan/session.hpp"

struct pqcan_profile_set {
  pqcan::ProfileSet set;
};

struct pqcan_run_config {
  pqcan::RunConfig cfg;
};

struct pqcan_results {
  std::vector<pqcan::CellResult> cells;
  std::string sessions;
};

namespace {

thread_local std::string t_last_error;

pqcan_status fail(pqcan_status code, const std::string& message) {
  t_last_error = message;
  return code;
}

template <typename Fn>
pqcan_status guarded(Fn&& fn) {
  try {
    pqcan_status s = fn();
    if (s == PQCAN_OK) t_last_error.clear();
    return s;
  } catch (const pqcan::ParseError& e) {
    return fail(PQCAN_ERR_PARSE, e.what());
  } catch (const std::out_of_range& e) {
    return fail(PQCAN_ERR_NOT_FOUND, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PQCAN_ERR_INVALID_ARG, e.what());
  } catch (const std::exception& e) {
    return fail(PQCAN_ERR_RUNTIME, e.what());
  }
}

pqcan_status fill_buffer(const std::string& s, char* buf, size_t* len) {
  if (!len) return fail(PQCAN_ERR_INVALID_ARG, "len is null");
  size_t need = s.size() + 1;
  if (!buf) {
    *len = need;
    return PQCAN_OK;
  }
  if (*len < need) {
    size_t given = *len;
    *len = need;
    return fail(PQCAN_ERR_BUFFER_TOO_SMALL,
                "buffer of " + std::to_string(given) + " bytes, need " +
                    std::to_string(need));
  }
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  *len = need;
  return PQCAN_OK;
}

pqcan_status write_text(const std::string& text, const char* path) {
  if (!path) return fail(PQCAN_ERR_INVALID_ARG, "path is null");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return fail(PQCAN_ERR_IO, std::string("cannot open for writing: ") + path);
  out << text;
  out.flush();
  if (!out) return fail(PQCAN_ERR_IO, std::string("write failed: ") + path);
  return PQCAN_OK;
}

}  // namespace

extern "C" {

const char* pqcan_version(void) { return "1.0.0"; }

const char* pqcan_last_error(void) { return t_last_error.c_str(); }

pqcan_status pqcan_profile_set_load(const char* path, pqcan_profile_set** out) {
  return guarded([&]() -> pqcan_status {
    if (!path || !out) return fail(PQCAN_ERR_INVALID_ARG, "null argument");
    auto handle = std::make_unique<pqcan_profile_set>();
    handle->set = pqcan::ProfileSet::load(path);
    *out = handle.release();
    return PQCAN_OK;
  });
}

pqcan_status pqcan_profile_set_parse(const char* text, const char* origin,
                                     pqcan_profile_set** out) {
  return guarded([&]() -> pqcan_status {
    if (!text || !out) return fail(PQCAN_ERR_INVALID_ARG, "null argument");
    auto handle = std::make_unique<pqcan_profile_set>();
    handle->set = pqcan::ProfileSet::parse(text, origin ? origin : "<memory>");
    *out = handle.release();
    return PQCAN_OK;
  });
}

void pqcan_profile_set_free(pqcan_profile_set* set) { delete set; }

pqcan_status pqcan_profile_count(const pqcan_profile_set* set, size_t* out_count) {
  return guarded([&]() -> pqcan_status {
    if (!set || !out_count) return fail(PQCAN_ERR_INVALID_ARG, "null argument");
    *out_count = set->set.all().size();
    return PQCAN_OK;
  });
}

pqcan_status pqcan_profile_line(const pqcan_profile_set* set, size_t index,
                                char* buf, size_t* len) {
  return guarded([&]() -> pqcan_status {
    if (!set) return fail(PQCAN_ERR_INVALID_ARG, "null argument");
    auto profiles = set->set.all();
    if (index >= profiles.size()) {
      return fail(PQCAN_ERR_NOT_FOUND,
                  "index " + std::to_string(index) + " of " +
                      std::to_string(profiles.size()) + " profiles");
    }
    const pqcan::AlgorithmProfile& p = profiles[index];
    std::string line = p.name;
    line += '\t';
    line += pqcan::to_string(p.kind);
    line += '\t';
    line += std::to_string(p.security_level);
    line += '\t';
    line += std::to_string(p.public_key_bytes);
    line += '\t';
    line += std::to_string(p.secret_key_bytes);
    line += '\t';
    line += std::to_string(p.kind == pqcan::AlgoKind::kem ? p.ciphertext_bytes
                                                          : p.signature_bytes);
    return fill_buffer(line, buf, len);
  });
}

pqcan_status pqcan_run_config_load(const char* path, pqcan_run_config** out) {
  return guarded([&]() -> pqcan_status {
    if (!path || !out) return fail(PQCAN_ERR_INVALID_ARG, "null argument");
    auto handle = std::make_unique<pqcan_run_config>();
    handle->cfg = pqcan::RunConfig::load(path);
    *out = handle.release();
    return PQCAN_OK;
  });
}

pqcan_status pqcan_run_config_parse(const char* text, const char* origin,
                                    pqcan_run_config** out) {
  return guarded([&]() -> pqcan_status {
    if (!text || !out) return fail(PQCAN_ERR_INVALID_ARG, "null argument");
    auto handle = std::make_unique<pqcan_run_config>();
    handle->cfg = pqcan::RunConfig::parse(text, origin ? origin : "<memory>");
    *out = handle.release();
    return PQCAN_OK;
  });
}

void pqcan_run_config_free(pqcan_run_config* cfg) { delete cfg; }

pqcan_status pqcan_run_config_set(pqcan_run_config* cfg, const char* key,
                                  const char* value) {
  return guarded([&]() -> pqcan_status {
    if (!cfg || !key || !value) return fail(PQCAN_ERR_INVALID_ARG, "null argument");
    cfg->cfg.set_key(key, value);
    return PQCAN_OK;
  });
}

pqcan_status pqcan_campaign_run(const pqcan_run_config* cfg,
                                const pqcan_profile_set* profiles,
                                unsigned jobs, pqcan_progress_fn progress,
                                void* user, pqcan_results** out) {
  return guarded([&]() -> pqcan_status {
    if (!cfg || !profiles || !out) return fail(PQCAN_ERR_INVALID_ARG, "null argument");

    pqcan::CampaignSpec spec = cfg->cfg.spec;
    spec.algorithms = cfg->cfg.algorithm_list(profiles->set);

    pqcan::CampaignOptions opts;
    opts.jobs = jobs == 0 ? 1 : jobs;
    if (progress) {
      opts.progress = [progress, user](std::size_t done, std::size_t total) {
        return progress(done, total, user) == 0;
      };
    }

    pqcan::CampaignResult res = pqcan::run_campaign(spec, profiles->set, opts);

    auto handle = std::make_unique<pqcan_results>();
    handle->cells = std::move(res.cells);
    handle->sessions = pqcan::session_csv_header();
    handle->sessions += '\n';
    for (const std::string& chunk : res.session_lines) handle->sessions += chunk;
    *out = handle.release();
    if (res.aborted) {
      return fail(PQCAN_ERR_PARTIAL, "campaign stopped by progress callback");
    }
    return PQCAN_OK;
  });
}

pqcan_status pqcan_results_load_csv(const char* path, pqcan_results** out) {
  return guarded([&]() -> pqcan_status {
    if (!path || !out) return fail(PQCAN_ERR_INVALID_ARG, "null argument");
    std::ifstream in(path, std::ios::binary);
    if (!in) return fail(PQCAN_ERR_IO, std::string("cannot open file: ") + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    auto handle = std::make_unique<pqcan_results>();
    handle->cells = pqcan::parse_results_csv(buf.str(), path);
    *out = handle.release();
    return PQCAN_OK;
  });
}

void pqcan_results_free(pqcan_results* res) { delete res; }

pqcan_status pqcan_results_rows(const pqcan_results* res, size_t* out_rows) {
  return guarded([&]() -> pqcan_status {
    if (!res || !out_rows) return fail(PQCAN_ERR_INVALID_ARG, "null argument");
    *out_rows = res->cells.size();
    return PQCAN_OK;
  });
}

pqcan_status pqcan_results_csv_string(const pqcan_results* res, char* buf,
                                      size_t* len) {
  return guarded([&]() -> pqcan_status {
    if (!res) return fail(PQCAN_ERR_INVALID_ARG, "null argument");
    return fill_buffer(pqcan::results_csv(res->cells), buf, len);
  });
}

pqcan_status pqcan_results_markdown_string(const pqcan_results* res, char* buf,
                                           size_t* len) {
  return guarded([&]() -> pqcan_status {
    if (!res) return fail(PQCAN_ERR_INVALID_ARG, "null argument");
    return fill_buffer(pqcan::results_markdown(res->cells), buf, len);
  });
}

pqcan_status pqcan_results_write_csv(const pqcan_results* res, const char* path) {
  return guarded([&]() -> pqcan_status {
    if (!res) return fail(PQCAN_ERR_INVALID_ARG, "null argument");
    return write_text(pqcan::results_csv(res->cells), path);
  });
}

pqcan_status pqcan_results_write_markdown(const pqcan_results* res,
                                          const char* path) {
  return guarded([&]() -> pqcan_status {
    if (!res) return fail(PQCAN_ERR_INVALID_ARG, "null argument");
    return write_text(pqcan::results_markdown(res->cells), path);
  });
}

pqcan_status pqcan_results_sessions_string(const pqcan_results* res, char* buf,
                                           size_t* len) {
  return guarded([&]() -> pqcan_status {
    if (!res) return fail(PQCAN_ERR_INVALID_ARG, "null argument");
    return fill_buffer(res->sessions, buf, len);
  });
}

}  // extern "C"
