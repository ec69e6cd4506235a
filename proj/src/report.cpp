#include "pqcan/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "pqcan/kvfile.hpp"

namespace pqcan {

std::string results_csv_header() {
  return "algorithm,kind,config,security_level,n_iterations,success_rate,"
         "keygen_mean_ms,keygen_std_ms,op2_mean_ms,op2_std_ms,op3_mean_ms,"
         "op3_std_ms,overhead_mean_ms,overhead_std_ms,crypto_only_mean_ms,"
         "bytes_on_wire_mean";
}

std::string results_csv(const std::vector<CellResult>& cells) {
  std::string out = results_csv_header();
  out += '\n';
  char buf[512];
  for (const CellResult& c : cells) {
    std::snprintf(buf, sizeof buf,
                  "%s,%s,%s,%d,%zu,%.4f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,"
                  "%.6f,%.6f,%.1f",
                  c.algorithm.c_str(), std::string(to_string(c.kind)).c_str(),
                  c.config.c_str(), c.security_level, c.n_iterations,
                  c.success_rate, c.keygen.mean, c.keygen.std_dev, c.op2.mean,
                  c.op2.std_dev, c.op3.mean, c.op3.std_dev, c.overhead.mean,
                  c.overhead.std_dev, c.crypto_only_mean, c.bytes_on_wire_mean);
    out += buf;
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(pos));
      return out;
    }
    out.emplace_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

double parse_double(const std::string& s, const std::string& origin, int line) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ParseError(origin, line, "bad number '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s, const std::string& origin, int line) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw ParseError(origin, line, "bad integer '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<CellResult> parse_results_csv(const std::string& text,
                                          const std::string& origin) {
  std::vector<CellResult> cells;
  bool saw_header = false;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = std::string_view(text).substr(
        pos, eol == std::string::npos ? text.size() - pos : eol - pos);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      if (!saw_header) {
        if (line != results_csv_header()) {
          throw ParseError(origin, lineno, "unexpected results header");
        }
        saw_header = true;
      } else {
        std::vector<std::string> f = split_csv(line);
        if (f.size() != 16) {
          throw ParseError(origin, lineno,
                           "expected 16 columns, got " + std::to_string(f.size()));
        }
        CellResult c;
        c.algorithm = f[0];
        if (f[1] == "kem") {
          c.kind = AlgoKind::kem;
        } else if (f[1] == "dsa") {
          c.kind = AlgoKind::dsa;
        } else {
          throw ParseError(origin, lineno, "unknown kind '" + f[1] + "'");
        }
        c.config = f[2];
        c.security_level = static_cast<int>(parse_int(f[3], origin, lineno));
        c.n_iterations = static_cast<std::size_t>(parse_int(f[4], origin, lineno));
        c.success_rate = parse_double(f[5], origin, lineno);
        c.keygen = {parse_double(f[6], origin, lineno), parse_double(f[7], origin, lineno)};
        c.op2 = {parse_double(f[8], origin, lineno), parse_double(f[9], origin, lineno)};
        c.op3 = {parse_double(f[10], origin, lineno), parse_double(f[11], origin, lineno)};
        c.overhead = {parse_double(f[12], origin, lineno), parse_double(f[13], origin, lineno)};
        c.crypto_only_mean = parse_double(f[14], origin, lineno);
        c.bytes_on_wire_mean = parse_double(f[15], origin, lineno);
        c.n_success = static_cast<std::size_t>(
            std::llround(c.success_rate * static_cast<double>(c.n_iterations)));
        cells.push_back(std::move(c));
      }
    }
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  if (!saw_header) throw ParseError(origin, 1, "missing results header");
  return cells;
}

namespace {

void append_table(std::string& out, const std::vector<CellResult>& cells,
                  AlgoKind kind) {
  out += kind == AlgoKind::kem ? "## Key exchange\n\n" : "## Signatures\n\n";
  const char* op2 = kind == AlgoKind::kem ? "Encapsulation" : "Signing";
  const char* op3 = kind == AlgoKind::kem ? "Decapsulation" : "Verification";

  // Algorithms ordered by their best mean overhead, fastest first.
  std::vector<std::string> order;
  std::map<std::string, double> best;
  for (const CellResult& c : cells) {
    if (c.kind != kind) continue;
    auto it = best.find(c.algorithm);
    if (it == best.end()) {
      order.push_back(c.algorithm);
      best[c.algorithm] = c.overhead.mean;
    } else if (c.overhead.mean < it->second) {
      it->second = c.overhead.mean;
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](const std::string& a, const std::string& b) {
                     return best[a] < best[b];
                   });

  char buf[512];
  std::snprintf(buf, sizeof buf,
                "| Algorithm | Level | Config | Success rate | Keygen (ms) | "
                "%s (ms) | %s (ms) | Overhead (ms) | Bytes on wire |\n",
                op2, op3);
  out += buf;
  out += "|---|---|---|---|---|---|---|---|---|\n";
  for (const std::string& name : order) {
    for (const CellResult& c : cells) {
      if (c.kind != kind || c.algorithm != name) continue;
      std::snprintf(buf, sizeof buf,
                    "| %s | %d | %s | %.2f | %.3f ± %.3f | %.3f ± %.3f | "
                    "%.3f ± %.3f | %.3f ± %.3f | %.0f |\n",
                    c.algorithm.c_str(), c.security_level, c.config.c_str(),
                    c.success_rate, c.keygen.mean, c.keygen.std_dev, c.op2.mean,
                    c.op2.std_dev, c.op3.mean, c.op3.std_dev, c.overhead.mean,
                    c.overhead.std_dev, c.bytes_on_wire_mean);
      out += buf;
    }
  }
  out += '\n';
}

}  // namespace

std::string results_markdown(const std::vector<CellResult>& cells) {
  std::string out = "# Handshake measurements\n\n";
  bool any_kem = false, any_dsa = false;
  for (const CellResult& c : cells) {
    any_kem = any_kem || c.kind == AlgoKind::kem;
    any_dsa = any_dsa || c.kind == AlgoKind::dsa;
  }
  if (any_kem) append_table(out, cells, AlgoKind::kem);
  if (any_dsa) append_table(out, cells, AlgoKind::dsa);
  return out;
}

}  // namespace pqcan
