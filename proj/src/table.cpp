#include "tabreason/table.hpp"

#include <charconv>
#include <cmath>
#include <unordered_set>

#include "tabreason/error.hpp"
#include "tabreason/text.hpp"

namespace tabreason {

namespace {

struct MetaLine {
  std::string_view prefix;
  std::optional<std::string> Table::*field;
};

// Spellings seen in table headers of the supported corpora.
constexpr MetaLine kMetaLines[] = {
    {"page title:", &Table::page_title},   {"paper title:", &Table::page_title},
    {"section title:", &Table::section_title}, {"table caption:", &Table::caption},
    {"caption:", &Table::caption},
};

struct SplitLine {
  std::vector<std::string> fields;
  bool leading_pipe = false;
  bool trailing_pipe = false;
};

// Splits on unescaped '|'. "\|" yields a literal pipe inside the field.
SplitLine split_pipes(std::string_view line) {
  SplitLine out;
  std::string_view t = text::trim(line);
  std::string current;
  bool last_was_separator = false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const char c = t[i];
    if (c == '\\' && i + 1 < t.size() && t[i + 1] == '|') {
      current.push_back('|');
      ++i;
      last_was_separator = false;
      continue;
    }
    if (c == '|') {
      if (i == 0) out.leading_pipe = true;
      out.fields.push_back(std::move(current));
      current.clear();
      last_was_separator = true;
      continue;
    }
    current.push_back(c);
    last_was_separator = false;
  }
  out.fields.push_back(std::move(current));
  out.trailing_pipe = last_was_separator;
  return out;
}

bool has_unescaped_pipe(std::string_view line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && i + 1 < line.size() && line[i + 1] == '|') {
      ++i;
      continue;
    }
    if (line[i] == '|') return true;
  }
  return false;
}

std::vector<std::string> row_fields(std::string_view line, bool bordered) {
  SplitLine split = split_pipes(line);
  auto& fields = split.fields;
  if (bordered) {
    if (split.leading_pipe && !fields.empty()) fields.erase(fields.begin());
    if (split.trailing_pipe && !fields.empty()) fields.pop_back();
  }
  for (auto& f : fields) f = std::string(text::trim(f));
  return fields;
}

bool is_alignment_row(const std::vector<std::string>& fields) {
  if (fields.empty()) return false;
  for (const auto& f : fields) {
    std::string_view v = f;
    if (!v.empty() && v.front() == ':') v.remove_prefix(1);
    if (!v.empty() && v.back() == ':') v.remove_suffix(1);
    if (v.size() < 3) return false;
    for (char c : v) {
      if (c != '-') return false;
    }
  }
  return true;
}

// Returns true (and fills the field) when `line` is a metadata line.
bool apply_meta_line(Table& table, std::string_view line) {
  std::string_view t = text::trim(line);
  if (has_unescaped_pipe(t)) return false;
  for (const auto& meta : kMetaLines) {
    if (text::istarts_with(t, meta.prefix)) {
      std::string value(text::trim(t.substr(meta.prefix.size())));
      for (std::size_t pos = value.find("\\|"); pos != std::string::npos; pos = value.find("\\|", pos)) {
        value.erase(pos, 1);
        ++pos;
      }
      table.*(meta.field) = std::move(value);
      return true;
    }
  }
  return false;
}

std::string escape_cell(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (c == '|') {
      out += "\\|";
    } else if (c == '\n' || c == '\r') {
      out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string header_key(std::string_view name) {
  return text::to_lower(text::collapse_whitespace(name));
}

void fix_headers(Table& table) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < table.headers.size(); ++i) {
    auto& h = table.headers[i];
    h = std::string(text::trim(h));
    if (h.empty()) {
      h = "column" + std::to_string(i);
      table.warnings.push_back("empty header " + std::to_string(i) + " renamed to " + h);
    }
    if (!seen.insert(header_key(h)).second) {
      table.warnings.push_back("duplicate header '" + h + "'; references resolve to the first match");
    }
  }
}

void append_row(Table& table, std::vector<std::string> fields, std::size_t line_no) {
  const std::size_t width = table.headers.size();
  if (fields.size() < width) {
    table.warnings.push_back("row " + std::to_string(line_no) + ": padded from " +
                             std::to_string(fields.size()) + " to " + std::to_string(width) +
                             " cells");
    fields.resize(width);
  } else if (fields.size() > width) {
    table.warnings.push_back("row " + std::to_string(line_no) + ": cut from " +
                             std::to_string(fields.size()) + " to " + std::to_string(width) +
                             " cells");
    fields.resize(width);
  }
  Row row;
  row.reserve(width);
  for (auto& f : fields) row.emplace_back(f);
  table.rows.push_back(std::move(row));
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// Accepts "1,234,567" style groupings only.
bool valid_grouping(std::string_view integer_part) {
  std::size_t first = integer_part.find(',');
  if (first == std::string_view::npos) return true;
  if (first == 0 || first > 3 || !all_digits(integer_part.substr(0, first))) return false;
  std::size_t pos = first;
  while (pos != std::string_view::npos) {
    std::size_t next = integer_part.find(',', pos + 1);
    std::size_t len = (next == std::string_view::npos ? integer_part.size() : next) - pos - 1;
    if (len != 3 || !all_digits(integer_part.substr(pos + 1, 3))) return false;
    pos = next;
  }
  return true;
}

bool is_decimal_literal(std::string_view s) {
  std::size_t i = 0;
  std::size_t mantissa_digits = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') { ++i; ++mantissa_digits; }
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') { ++i; ++mantissa_digits; }
  }
  if (mantissa_digits == 0) return false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') { ++i; ++exp_digits; }
    if (exp_digits == 0) return false;
  }
  return i == s.size();
}

}  // namespace

Cell::Cell(std::string_view raw) : raw_(text::trim(raw)) {}

Table make_table(std::vector<std::string> headers, std::vector<std::vector<std::string>> rows) {
  Table table;
  table.headers = std::move(headers);
  fix_headers(table);
  for (std::size_t i = 0; i < rows.size(); ++i) append_row(table, std::move(rows[i]), i + 1);
  return table;
}

Table parse_pipe_table(std::string_view input, std::span<const std::string> meta) {
  Table table;
  for (const auto& m : meta) apply_meta_line(table, m);

  const auto lines = text::split_lines(input);
  bool have_header = false;
  bool bordered = false;
  bool expect_alignment = false;
  std::size_t line_no = 0;
  for (const auto& line : lines) {
    ++line_no;
    std::string_view content = text::line_view(input, line);
    if (text::trim(content).empty()) continue;
    if (!have_header) {
      if (apply_meta_line(table, content)) continue;
      bordered = text::trim(content).front() == '|';
      table.headers = row_fields(content, bordered);
      fix_headers(table);
      have_header = true;
      expect_alignment = true;
      continue;
    }
    auto fields = row_fields(content, bordered);
    if (expect_alignment) {
      expect_alignment = false;
      if (is_alignment_row(fields)) continue;
    }
    append_row(table, std::move(fields), line_no);
  }
  if (!have_header) throw Error(ErrorCode::EmptyInput, "no header line in table text");
  return table;
}

std::string format_pipe_row(std::span<const std::string> cells) {
  std::string out = "|";
  for (const auto& c : cells) {
    out += ' ';
    out += escape_cell(c);
    out += " |";
  }
  return out;
}

std::string format_pipe_row(std::span<const Cell> cells) {
  std::string out = "|";
  for (const auto& c : cells) {
    out += ' ';
    out += escape_cell(c.raw());
    out += " |";
  }
  return out;
}

namespace {

std::vector<std::string> serialized_lines(const Table& table) {
  std::vector<std::string> lines;
  auto meta = [&](const char* label, const std::optional<std::string>& value) {
    if (!value) return;
    std::string line = std::string(label) + " " + escape_cell(*value);
    lines.emplace_back(text::trim_right(line));
  };
  meta("Page Title:", table.page_title);
  meta("Section title:", table.section_title);
  meta("Caption:", table.caption);
  lines.push_back(format_pipe_row(std::span<const std::string>(table.headers)));
  for (const auto& row : table.rows) lines.push_back(format_pipe_row(std::span<const Cell>(row)));
  return lines;
}

}  // namespace

std::string serialize_for_prompt(const Table& table) {
  return text::join(serialized_lines(table), "\n");
}

std::size_t estimate_tokens(std::string_view s) {
  return (text::codepoint_count(s) + 3) / 4;
}

Table truncate_to_budget(const Table& table, std::size_t budget) {
  const auto lines = serialized_lines(table);
  const std::size_t fixed_lines = lines.size() - table.rows.size();

  std::size_t chars = 0;
  for (std::size_t i = 0; i < fixed_lines; ++i) {
    chars += text::codepoint_count(lines[i]) + (i ? 1 : 0);
  }
  if ((chars + 3) / 4 > budget) {
    throw Error(ErrorCode::BudgetTooSmall,
                "metadata and header need " + std::to_string((chars + 3) / 4) +
                    " tokens, budget is " + std::to_string(budget));
  }
  std::size_t keep = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    chars += 1 + text::codepoint_count(lines[fixed_lines + r]);
    if ((chars + 3) / 4 > budget) break;
    keep = r + 1;
  }
  Table out = table;
  out.rows.resize(keep);
  if (keep < table.rows.size()) {
    out.warnings.push_back("truncated to " + std::to_string(keep) + " of " +
                           std::to_string(table.rows.size()) + " rows");
  }
  return out;
}

std::optional<double> cell_as_number(std::string_view raw) {
  std::string_view s = text::trim(raw);
  if (s.empty()) return std::nullopt;
  bool percent = false;
  if (s.back() == '%') {
    percent = true;
    s = text::trim_right(s.substr(0, s.size() - 1));
  }
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) return std::nullopt;

  std::string cleaned;
  if (s.find(',') != std::string_view::npos) {
    std::size_t stop = s.find_first_of(".eE");
    if (!valid_grouping(s.substr(0, stop))) return std::nullopt;
    if (stop != std::string_view::npos && s.substr(stop).find(',') != std::string_view::npos) {
      return std::nullopt;
    }
    for (char c : s) {
      if (c != ',') cleaned.push_back(c);
    }
  } else {
    cleaned = std::string(s);
  }
  if (!is_decimal_literal(cleaned)) return std::nullopt;

  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cleaned.data(), cleaned.data() + cleaned.size(), value);
  if (ec != std::errc{} || ptr != cleaned.data() + cleaned.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  if (negative) value = -value;
  if (percent) value /= 100.0;
  return value;
}

}  // namespace tabreason
