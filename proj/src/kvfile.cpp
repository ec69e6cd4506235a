#include "pqcan/kvfile.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pqcan {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

ParseError::ParseError(std::string_view origin, int line, std::string_view what)
    : std::runtime_error(std::string(origin) + ":" + std::to_string(line) +
                         ": " + std::string(what)),
      line_(line) {}

KvFile KvFile::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

KvFile KvFile::parse_string(std::string_view text, std::string_view origin) {
  KvFile out;
  out.origin = std::string(origin);
  std::string section;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (!line.empty()) {
      if (line.front() == '[') {
        if (line.back() != ']') throw ParseError(origin, lineno, "unterminated section header");
        std::string_view name = trim(line.substr(1, line.size() - 2));
        if (name.empty()) throw ParseError(origin, lineno, "empty section name");
        section = std::string(name);
      } else {
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
          throw ParseError(origin, lineno, "expected 'key = value'");
        }
        std::string_view key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError(origin, lineno, "empty key");
        out.entries.push_back(KvEntry{section, std::string(key),
                                      std::string(trim(line.substr(eq + 1))),
                                      lineno});
      }
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return out;
}

long long kv_int(const KvFile& f, const KvEntry& e) {
  long long v = 0;
  auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc{} || p != e.value.data() + e.value.size()) {
    throw ParseError(f.origin, e.line,
                     "expected integer for '" + e.key + "', got '" + e.value + "'");
  }
  return v;
}

double kv_double(const KvFile& f, const KvEntry& e) {
  double v = 0;
  auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc{} || p != e.value.data() + e.value.size()) {
    throw ParseError(f.origin, e.line,
                     "expected number for '" + e.key + "', got '" + e.value + "'");
  }
  return v;
}

bool kv_bool(const KvFile& f, const KvEntry& e) {
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  throw ParseError(f.origin, e.line,
                   "expected boolean for '" + e.key + "', got '" + e.value + "'");
}

std::vector<std::string> kv_list(const KvEntry& e) {
  std::vector<std::string> out;
  std::string_view rest = e.value;
  while (!rest.empty()) {
    std::size_t comma = rest.find(',');
    std::string_view item = trim(rest.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

}  // namespace pqcan
