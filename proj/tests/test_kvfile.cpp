#include <string>

#include "doctest.h"
#include "pqcan/kvfile.hpp"

using namespace pqcan;

TEST_CASE("sections, comments and whitespace") {
  KvFile f = KvFile::parse_string(
      "# header comment\n"
      "top = 1\n"
      "[alpha]\n"
      "  key = some value  # trailing comment\r\n"
      "\n"
      "[ beta gamma ]\n"
      "list = a, b , c\n",
      "mem");
  REQUIRE(f.entries.size() == 3);
  CHECK(f.entries[0].section == "");
  CHECK(f.entries[0].key == "top");
  CHECK(f.entries[0].value == "1");
  CHECK(f.entries[0].line == 2);
  CHECK(f.entries[1].section == "alpha");
  CHECK(f.entries[1].value == "some value");
  CHECK(f.entries[1].line == 4);
  CHECK(f.entries[2].section == "beta gamma");
  CHECK(f.entries[2].line == 7);
}

TEST_CASE("malformed lines report origin and line number") {
  CHECK_THROWS_WITH_AS(KvFile::parse_string("[oops\n", "cfg"),
                       "cfg:1: unterminated section header", ParseError);
  CHECK_THROWS_WITH_AS(KvFile::parse_string("a=1\nno equals here\n", "cfg"),
                       "cfg:2: expected 'key = value'", ParseError);
  CHECK_THROWS_WITH_AS(KvFile::parse_string("= 3\n", "cfg"),
                       "cfg:1: empty key", ParseError);
  CHECK_THROWS_WITH_AS(KvFile::parse_string("[]\n", "cfg"),
                       "cfg:1: empty section name", ParseError);
  try {
    KvFile::parse_string("ok = 1\nbroken\n", "cfg");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(KvFile::parse_file("/nonexistent/nope.cfg"), ParseError);
}

TEST_CASE("typed accessors") {
  KvFile f = KvFile::parse_string(
      "i = -42\nd = 2.5\nb1 = yes\nb0 = 0\nbad_int = 12x\nbad_num = \n"
      "items = one, two ,, three\n",
      "mem");
  CHECK(kv_int(f, f.entries[0]) == -42);
  CHECK(kv_double(f, f.entries[1]) == doctest::Approx(2.5));
  CHECK(kv_bool(f, f.entries[2]));
  CHECK_FALSE(kv_bool(f, f.entries[3]));
  CHECK_THROWS_AS(kv_int(f, f.entries[4]), ParseError);
  CHECK_THROWS_AS(kv_double(f, f.entries[5]), ParseError);
  CHECK_THROWS_AS(kv_bool(f, f.entries[4]), ParseError);
  auto items = kv_list(f.entries[6]);
  REQUIRE(items.size() == 3);
  CHECK(items[0] == "one");
  CHECK(items[1] == "two");
  CHECK(items[2] == "three");
}
