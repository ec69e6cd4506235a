#pragma once
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pqcan {

// Parse failure for any of the line-oriented text formats (profiles, run
// configs). The message always starts with "origin:line:".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string_view origin, int line, std::string_view what);
  int line() const { return line_; }

 private:
  int line_;
};

// Sectioned key-value text:
//
//   # comment (also allowed after a value)
//   [section.name]
//   key = value
//
// Section names may contain any character except ']'. Values keep interior
// whitespace; surrounding whitespace is trimmed.
struct KvEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

struct KvFile {
  std::string origin;
  std::vector<KvEntry> entries;  // document order

  static KvFile parse_file(const std::string& path);
  static KvFile parse_string(std::string_view text, std::string_view origin);
};

// Value conversion helpers; throw ParseError citing the entry's line.
long long kv_int(const KvFile& f, const KvEntry& e);
double kv_double(const KvFile& f, const KvEntry& e);
bool kv_bool(const KvFile& f, const KvEntry& e);
std::vector<std::string> kv_list(const KvEntry& e);  // comma separated

}  // namespace pqcan
