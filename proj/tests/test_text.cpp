#include "doctest.h"
#include "tabreason/text.hpp"

using namespace tabreason;

TEST_SUITE("text") {

TEST_CASE("trim and case folding") {
  CHECK(text::trim("  a b \t\n") == "a b");
  CHECK(text::trim("   ").empty());
  CHECK(text::to_lower("AbC \xc3\x89") == "abc \xc3\x89");
  CHECK(text::iequals("Select", "SELECT"));
  CHECK(text::istarts_with("Caption: x", "caption:"));
  CHECK_FALSE(text::istarts_with("Cap", "caption"));
}

TEST_CASE("collapse_whitespace") {
  CHECK(text::collapse_whitespace("  Total \t  Points\n") == "Total Points");
  CHECK(text::collapse_whitespace("") == "");
}

TEST_CASE("code points") {
  CHECK(text::codepoint_count("Z\xc3\xbcrich") == 6);
  CHECK(text::codepoints("a\xc3\xbc").size() == 2);
  CHECK(text::codepoints("\xff" "a").size() == 2);
}

TEST_CASE("split_lines keeps offsets") {
  const std::string s = "ab\r\ncd\n\nef";
  auto lines = text::split_lines(s);
  REQUIRE(lines.size() == 4);
  CHECK(text::line_view(s, lines[0]) == "ab");
  CHECK(lines[0].next == 4);
  CHECK(text::line_view(s, lines[2]).empty());
  CHECK(text::line_view(s, lines[3]) == "ef");
  CHECK(lines[3].next == s.size());
}

TEST_CASE("format_number") {
  CHECK(text::format_number(10.0) == "10");
  CHECK(text::format_number(0.1) == "0.1");
  CHECK(text::format_number(-2.5) == "-2.5");
  CHECK(text::format_number(0.465) == "0.465");
  CHECK(text::format_number(1e21) == "1e+21");
}

TEST_CASE("join") {
  CHECK(text::join({"a", "b", "c"}, ", ") == "a, b, c");
  CHECK(text::join({}, ", ").empty());
}

}
