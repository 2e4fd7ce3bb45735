#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabreason/instance.hpp"

namespace tabreason {

// One SQL statement found in a generation, with whatever result the model
// claimed for it. Offsets index into the segmented text.
struct SqlBlock {
  std::string sql_text;
  std::optional<std::string> claimed_result;
  std::size_t begin = 0;
  std::size_t end = 0;
  // Offset just past the SQL itself (closing fence or last statement line).
  std::size_t sql_end = 0;
  // Offset just past the marker text ("Executed result:"), when one was found.
  std::optional<std::size_t> marker_end;
  // text[begin, end) and the text between this block and the next one.
  std::string raw;
  std::string interlude;

  friend bool operator==(const SqlBlock&, const SqlBlock&) = default;
};

struct ResponseSegments {
  std::string prefix_text;
  std::vector<SqlBlock> sql_blocks;
  std::string suffix_text;

  // prefix + every block's raw text and interlude + suffix.
  std::string reassemble() const;

  friend bool operator==(const ResponseSegments&, const ResponseSegments&) = default;
};

const std::vector<std::string>& default_result_markers();

// Finds SQL written either as a ```sql fence or after a "SQL:" line, and the
// claimed result that follows a result marker. Never throws.
ResponseSegments segment_response(std::string_view generation,
                                  const std::vector<std::string>& markers = default_result_markers());

// The text the actual result gets appended to: everything up to and
// including the block's marker line. Without a marker the text is cut after
// the SQL and a "Executed result:" line is added. Throws Error(IndexOutOfRange).
std::string resume_prefix(std::string_view generation, std::size_t block_index,
                          const std::vector<std::string>& markers = default_result_markers());

// Lines of the form "3. Reasoning" or "**2. Write SQL**". Result rows such as
// "18. | 9 July 2015 |" do not count.
bool is_numbered_heading(std::string_view line);

struct Section {
  int number = 0;  // 0 for text before the first heading
  std::string text;
};

// Splits at numbered headings. Concatenating the texts gives the input back.
std::vector<Section> split_sections(std::string_view generation);

struct FinalAnswer {
  enum class Kind { Short, Label, Free, Missing };
  Kind kind = Kind::Missing;
  std::vector<std::string> answers;  // Short
  std::string text;                  // Label, Free

  static FinalAnswer missing() { return {}; }
  static FinalAnswer short_form(std::vector<std::string> answers) {
    return {Kind::Short, std::move(answers), {}};
  }
  static FinalAnswer label(std::string value) { return {Kind::Label, {}, std::move(value)}; }
  static FinalAnswer free(std::string value) { return {Kind::Free, {}, std::move(value)}; }

  bool is_missing() const noexcept { return kind == Kind::Missing; }

  friend bool operator==(const FinalAnswer&, const FinalAnswer&) = default;
};

std::string_view to_string(FinalAnswer::Kind kind);
nlohmann::ordered_json final_answer_to_json(const FinalAnswer& answer);
FinalAnswer final_answer_from_json(const nlohmann::json& j);

// Removes "**", "__", "\textbf{...}", surrounding quotes and a trailing
// period, repeatedly, then trims.
std::string strip_emphasis(std::string_view s);

// Looks for "... answer is X" in the last five non-empty lines; the last
// occurrence wins. Labels are returned in the spelling of `labels`. Never
// throws.
FinalAnswer extract_final_answer(std::string_view generation, TaskKind task,
                                 LabelSet labels = LabelSet::ThreeWay);

}  // namespace tabreason
