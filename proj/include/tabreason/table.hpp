#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tabreason {

// One table cell. The stored text is trimmed; a literal pipe inside a cell is
// kept unescaped here and written as "\|" when the table is serialized.
class Cell {
 public:
  Cell() = default;
  explicit Cell(std::string_view raw);

  const std::string& raw() const noexcept { return raw_; }

  // "" and "-" both mean "no value"; "-" is still written back verbatim.
  bool is_empty() const noexcept { return raw_.empty() || raw_ == "-"; }

  friend bool operator==(const Cell&, const Cell&) = default;

 private:
  std::string raw_;
};

using Row = std::vector<Cell>;

struct Table {
  std::optional<std::string> page_title;
  std::optional<std::string> section_title;
  std::optional<std::string> caption;
  std::vector<std::string> headers;
  std::vector<Row> rows;
  // Parse-time notes (ragged rows, renamed or duplicate headers). Not part of
  // the table's identity.
  std::vector<std::string> warnings;

  std::size_t column_count() const noexcept { return headers.size(); }

  // Equality ignores warnings.
  friend bool operator==(const Table& a, const Table& b) {
    return a.page_title == b.page_title && a.section_title == b.section_title &&
           a.caption == b.caption && a.headers == b.headers && a.rows == b.rows;
  }
};

// Builds a rectangular table from loose rows: short rows are padded with
// empty cells, long rows are cut, and each repair is recorded as a warning.
Table make_table(std::vector<std::string> headers, std::vector<std::vector<std::string>> rows);

struct Sentence {
  std::optional<std::string> title;
  std::string text;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct SentenceContext {
  std::vector<Sentence> items;

  bool empty() const noexcept { return items.empty(); }
  friend bool operator==(const SentenceContext&, const SentenceContext&) = default;
};

// Parses pipe-delimited rows. Both "| a | b |" and "a | b" layouts are
// accepted. Leading "Page Title:", "Section title:" and "Caption:" lines (or
// the entries of `meta`) fill the metadata fields; a markdown alignment row
// right after the header is skipped. Throws Error(EmptyInput) when there is
// no header line.
Table parse_pipe_table(std::string_view text, std::span<const std::string> meta = {});

// Optional metadata lines, then the header row, then one line per row, each
// written as "| a | b |". No trailing newline.
std::string serialize_for_prompt(const Table& table);

// The header row and the data rows only, one "| a | b |" line each.
std::string format_pipe_row(std::span<const std::string> cells);
std::string format_pipe_row(std::span<const Cell> cells);

// ceil(code points / 4).
std::size_t estimate_tokens(std::string_view text);

// Keeps the longest prefix of rows whose serialization fits in `budget`
// estimated tokens. Throws Error(BudgetTooSmall) if the metadata and header
// alone do not fit.
Table truncate_to_budget(const Table& table, std::size_t budget);

// Numeric reading of a cell: thousands separators are dropped, a leading sign
// is honored and a trailing "%" divides by 100. Anything else is not a number.
std::optional<double> cell_as_number(std::string_view raw);
inline std::optional<double> cell_as_number(const Cell& cell) { return cell_as_number(cell.raw()); }

}  // namespace tabreason
