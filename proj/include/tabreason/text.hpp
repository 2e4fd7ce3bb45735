#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the table, SQL and response modules.
// All case folding is ASCII-only; bytes >= 0x80 pass through untouched.
namespace tabreason::text {

std::string_view trim(std::string_view s);
std::string_view trim_left(std::string_view s);
std::string_view trim_right(std::string_view s);

std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool istarts_with(std::string_view s, std::string_view prefix);

// Collapses every run of whitespace into one space and trims both ends.
std::string collapse_whitespace(std::string_view s);

// Number of UTF-8 code points (continuation bytes are not counted).
std::size_t codepoint_count(std::string_view s);

// Splits into code points; malformed bytes are kept as single-byte units.
std::vector<std::string_view> codepoints(std::string_view s);

// A physical line of a larger text. `end` excludes the line terminator,
// `next` is the offset just past it (equal to `end` on the final line when
// the text does not end with a newline).
struct Line {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t next = 0;
};

std::vector<Line> split_lines(std::string_view s);

inline std::string_view line_view(std::string_view s, const Line& line) {
  return s.substr(line.begin, line.end - line.begin);
}

// Shortest decimal form that reads back to the same double; integral values
// print without a fractional part ("10", not "10.0").
std::string format_number(double value);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace tabreason::text
