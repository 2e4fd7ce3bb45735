#include <algorithm>
#include <cctype>

#include "tabreason/error.hpp"
#include "tabreason/response.hpp"
#include "tabreason/text.hpp"

namespace tabreason {

namespace {

using text::Line;

bool blank(std::string_view line) { return text::trim(line).empty(); }

bool starts_fence(std::string_view line) { return text::trim_left(line).starts_with("```"); }

bool opens_sql_fence(std::string_view line) { return text::istarts_with(text::trim_left(line), "```sql"); }

// "SQL", "SQL:" or "SQL: SELECT ...". Returns the offset (within `line`) of an
// inline statement, line.size() when there is none, or npos for other lines.
std::size_t sql_label(std::string_view line) {
  std::string_view t = text::trim(line);
  if (!text::istarts_with(t, "sql")) return std::string_view::npos;
  std::string_view rest = t.substr(3);
  if (rest.empty()) return line.size();
  if (rest.front() != ':') return std::string_view::npos;
  rest = text::trim_left(rest.substr(1));
  if (rest.empty()) return line.size();
  return static_cast<std::size_t>(rest.data() - line.data());
}

// Offset just past the marker (and any closing emphasis) within `line`.
std::optional<std::size_t> match_marker(std::string_view line, const std::vector<std::string>& markers) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '*' || line[i] == '#')) ++i;
  std::string_view t = line.substr(i);
  for (const auto& m : markers) {
    if (text::istarts_with(t, m)) {
      std::size_t end = i + m.size();
      while (end < line.size() && line[end] == '*') ++end;
      return end;
    }
  }
  return std::nullopt;
}

bool opens_block(std::string_view line) {
  return opens_sql_fence(line) || sql_label(line) != std::string_view::npos;
}

class Segmenter {
 public:
  Segmenter(std::string_view src, const std::vector<std::string>& markers)
      : src_(src), markers_(markers), lines_(text::split_lines(src)) {}

  std::vector<SqlBlock> run() {
    std::vector<SqlBlock> blocks;
    std::size_t i = 0;
    while (i < lines_.size()) {
      std::optional<std::size_t> after;
      if (opens_sql_fence(view(i))) {
        after = fenced(lines_[i].begin, i, blocks);
      } else if (std::size_t inl = sql_label(view(i)); inl != std::string_view::npos) {
        std::size_t j = i + 1;
        while (j < lines_.size() && blank(view(j))) ++j;
        if (inl == view(i).size() && j < lines_.size() && opens_sql_fence(view(j))) {
          after = fenced(lines_[i].begin, j, blocks);
        } else {
          after = line_style(i, inl, blocks);
        }
      }
      i = after ? *after : i + 1;
    }
    return blocks;
  }

 private:
  std::string_view view(std::size_t i) const { return text::line_view(src_, lines_[i]); }

  // Returns the index of the first line after the block, or nullopt when the
  // fence holds no statement.
  std::optional<std::size_t> fenced(std::size_t begin, std::size_t open, std::vector<SqlBlock>& out) {
    std::size_t close = open + 1;
    while (close < lines_.size() && !starts_fence(view(close))) ++close;
    if (close == lines_.size()) {
      const std::size_t body = open + 1 < lines_.size() ? lines_[open + 1].begin : src_.size();
      std::string sql(text::trim(src_.substr(body)));
      if (sql.empty()) return std::nullopt;
      SqlBlock b;
      b.sql_text = std::move(sql);
      b.begin = begin;
      b.end = b.sql_end = lines_.back().end;
      out.push_back(std::move(b));
      return lines_.size();
    }
    if (close == open + 1) return std::nullopt;
    const std::size_t body = lines_[open + 1].begin;
    std::string sql(text::trim(src_.substr(body, lines_[close].begin - body)));
    if (sql.empty()) return std::nullopt;
    SqlBlock b;
    b.sql_text = std::move(sql);
    b.begin = begin;
    b.sql_end = lines_[close].end;

    // "```Expected Result:" closes the fence and opens the result at once.
    std::string_view close_line = view(close);
    std::size_t ticks = close_line.find("```") + 3;
    if (auto m = match_marker(close_line.substr(ticks), markers_)) {
      return finish(std::move(b), close, lines_[close].begin + ticks + *m, out);
    }
    return finish(std::move(b), close, std::nullopt, out);
  }

  std::optional<std::size_t> line_style(std::size_t label, std::size_t inline_at, std::vector<SqlBlock>& out) {
    std::size_t first_stmt = label + 1;
    std::size_t stmt_begin;
    std::size_t last = label;
    const bool has_inline = inline_at < view(label).size();
    if (has_inline) {
      stmt_begin = lines_[label].begin + inline_at;
    } else {
      stmt_begin = first_stmt < lines_.size() ? lines_[first_stmt].begin : src_.size();
    }
    std::size_t j = first_stmt;
    while (j < lines_.size()) {
      std::string_view l = view(j);
      if (blank(l) || match_marker(l, markers_) || starts_fence(l) || is_numbered_heading(l) ||
          sql_label(l) != std::string_view::npos) {
        break;
      }
      last = j++;
    }
    if (!has_inline && last == label) return std::nullopt;
    SqlBlock b;
    b.sql_end = lines_[last].end;
    b.sql_text = std::string(text::trim(src_.substr(stmt_begin, b.sql_end - stmt_begin)));
    if (b.sql_text.empty()) return std::nullopt;
    b.begin = lines_[label].begin;
    return finish(std::move(b), last, std::nullopt, out);
  }

  // `last` is the final line of the SQL itself; `marker_end` is set when the
  // marker sat on that line.
  std::size_t finish(SqlBlock b, std::size_t last, std::optional<std::size_t> marker_end,
                     std::vector<SqlBlock>& out) {
    std::size_t marker_line = last;
    if (!marker_end) {
      std::size_t j = last + 1;
      while (j < lines_.size() && blank(view(j))) ++j;
      if (j < lines_.size()) {
        if (auto m = match_marker(view(j), markers_)) {
          marker_line = j;
          marker_end = lines_[j].begin + *m;
        }
      }
    }
    if (!marker_end) {
      b.end = b.sql_end;
      out.push_back(std::move(b));
      return last + 1;
    }
    b.marker_end = marker_end;

    // Content may start on the marker line itself ("Expected result: 4").
    std::optional<std::size_t> content_begin;
    std::size_t content_end = 0;
    const std::size_t marker_line_end = lines_[marker_line].end;
    if (!text::trim(src_.substr(*marker_end, marker_line_end - *marker_end)).empty()) {
      std::size_t p = *marker_end;
      while (p < marker_line_end && (src_[p] == ' ' || src_[p] == '\t')) ++p;
      content_begin = p;
      content_end = marker_line_end;
    }
    std::size_t j = marker_line + 1;
    std::size_t after = marker_line + 1;
    bool in_fence = false;
    while (j < lines_.size()) {
      std::string_view l = view(j);
      if (opens_block(l) || is_numbered_heading(l)) break;
      if (blank(l)) {
        if (content_begin && !in_fence) break;
        ++j;
        continue;
      }
      if (starts_fence(l)) in_fence = !in_fence;
      if (!content_begin) content_begin = lines_[j].begin;
      content_end = lines_[j].end;
      after = ++j;
    }
    if (content_begin) {
      b.claimed_result = std::string(src_.substr(*content_begin, content_end - *content_begin));
      b.end = content_end;
    } else {
      b.claimed_result = std::string();
      b.end = marker_line_end;
      after = marker_line + 1;
    }
    out.push_back(std::move(b));
    return after;
  }

  std::string_view src_;
  const std::vector<std::string>& markers_;
  std::vector<Line> lines_;
};

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Case-insensitive whole-word search; returns every start offset.
std::vector<std::size_t> find_words(std::string_view hay, std::string_view word) {
  std::vector<std::size_t> hits;
  const std::string h = text::to_lower(hay);
  const std::string w = text::to_lower(word);
  for (std::size_t p = h.find(w); p != std::string::npos; p = h.find(w, p + 1)) {
    const bool left = p == 0 || !word_char(h[p - 1]);
    const bool right = p + w.size() == h.size() || !word_char(h[p + w.size()]);
    if (left && right) hits.push_back(p);
  }
  return hits;
}

std::optional<std::string> to_label(std::string_view candidate, LabelSet set) {
  const auto& labels = labels_of(set);
  auto canonical = [&](std::string_view word) -> std::optional<std::string> {
    for (const auto& l : labels) {
      if (text::iequals(word, l)) return l;
    }
    // The other convention's spelling of the same verdict.
    if (set == LabelSet::TrueFalse) {
      if (text::iequals(word, "supports")) return std::string("true");
      if (text::iequals(word, "refutes")) return std::string("false");
    } else {
      if (text::iequals(word, "true")) return std::string("SUPPORTS");
      if (text::iequals(word, "false")) return std::string("REFUTES");
    }
    return std::nullopt;
  };
  if (auto exact = canonical(candidate)) return exact;
  // "SUPPORTS, because ..." or "false as the table shows ...": take the
  // verdict word at the front.
  static const char* kSpellings[] = {"not enough info", "supports", "refutes", "true", "false"};
  for (const char* s : kSpellings) {
    auto hits = find_words(candidate, s);
    if (!hits.empty() && hits.front() == 0) {
      if (auto l = canonical(s)) return l;
    }
  }
  return std::nullopt;
}

std::vector<std::string> split_answers(std::string_view s) {
  std::vector<std::string> parts;
  std::string cur;
  auto flush = [&] {
    std::string item = strip_emphasis(cur);
    if (!item.empty()) parts.push_back(std::move(item));
    cur.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == ',') {
      // Keep thousands separators: "1,200" is one number.
      const bool grouped = i > 0 && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i - 1])) &&
                           std::isdigit(static_cast<unsigned char>(s[i + 1]));
      if (!grouped) {
        flush();
        continue;
      }
    }
    if (text::istarts_with(s.substr(i), " and ")) {
      flush();
      i += 4;
      continue;
    }
    cur.push_back(s[i]);
  }
  flush();
  return parts;
}

}  // namespace

const std::vector<std::string>& default_result_markers() {
  static const std::vector<std::string> markers{"Executed result:", "Expected Result:", "Expected result:"};
  return markers;
}

std::string ResponseSegments::reassemble() const {
  std::string out = prefix_text;
  for (const auto& b : sql_blocks) out += b.raw + b.interlude;
  return out + suffix_text;
}

ResponseSegments segment_response(std::string_view generation, const std::vector<std::string>& markers) {
  ResponseSegments seg;
  seg.sql_blocks = Segmenter(generation, markers).run();
  auto& blocks = seg.sql_blocks;
  if (blocks.empty()) {
    seg.prefix_text = std::string(generation);
    return seg;
  }
  seg.prefix_text = std::string(generation.substr(0, blocks.front().begin));
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    auto& b = blocks[k];
    b.raw = std::string(generation.substr(b.begin, b.end - b.begin));
    if (k + 1 < blocks.size()) {
      b.interlude = std::string(generation.substr(b.end, blocks[k + 1].begin - b.end));
    }
  }
  seg.suffix_text = std::string(generation.substr(blocks.back().end));
  return seg;
}

std::string resume_prefix(std::string_view generation, std::size_t block_index,
                          const std::vector<std::string>& markers) {
  const auto seg = segment_response(generation, markers);
  if (block_index >= seg.sql_blocks.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "block " + std::to_string(block_index) + " of " +
                                                std::to_string(seg.sql_blocks.size()));
  }
  const SqlBlock& b = seg.sql_blocks[block_index];
  if (b.marker_end) return std::string(generation.substr(0, *b.marker_end)) + "\n";
  return std::string(generation.substr(0, b.sql_end)) + "\nExecuted result:\n";
}

bool is_numbered_heading(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '#' || line[i] == '*' || line[i] == '_')) {
    ++i;
  }
  const std::size_t digits = i;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i == digits || i >= line.size() || line[i] != '.') return false;
  ++i;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '*' || line[i] == '_')) ++i;
  return i < line.size() && std::isalpha(static_cast<unsigned char>(line[i]));
}

std::vector<Section> split_sections(std::string_view generation) {
  std::vector<Section> sections{{0, ""}};
  for (const auto& line : text::split_lines(generation)) {
    std::string_view l = text::line_view(generation, line);
    if (is_numbered_heading(l)) {
      std::size_t i = 0;
      while (!std::isdigit(static_cast<unsigned char>(l[i]))) ++i;
      int n = 0;
      while (std::isdigit(static_cast<unsigned char>(l[i]))) n = n * 10 + (l[i++] - '0');
      sections.push_back({n, ""});
    }
    sections.back().text += generation.substr(line.begin, line.next - line.begin);
  }
  if (sections.front().text.empty() && sections.size() > 1) sections.erase(sections.begin());
  return sections;
}

std::string_view to_string(FinalAnswer::Kind kind) {
  switch (kind) {
    case FinalAnswer::Kind::Short: return "short";
    case FinalAnswer::Kind::Label: return "label";
    case FinalAnswer::Kind::Free: return "free";
    case FinalAnswer::Kind::Missing: return "missing";
  }
  return "missing";
}

nlohmann::ordered_json final_answer_to_json(const FinalAnswer& answer) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(answer.kind);
  switch (answer.kind) {
    case FinalAnswer::Kind::Short: j["answers"] = answer.answers; break;
    case FinalAnswer::Kind::Label:
    case FinalAnswer::Kind::Free: j["text"] = answer.text; break;
    case FinalAnswer::Kind::Missing: break;
  }
  return j;
}

FinalAnswer final_answer_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "short") return FinalAnswer::short_form(j.at("answers").get<std::vector<std::string>>());
    if (kind == "label") return FinalAnswer::label(j.at("text").get<std::string>());
    if (kind == "free") return FinalAnswer::free(j.at("text").get<std::string>());
    if (kind == "missing") return FinalAnswer::missing();
    throw Error(ErrorCode::ParseFailure, "unknown answer kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseFailure, std::string("final answer: ") + e.what());
  }
}

std::string strip_emphasis(std::string_view s) {
  std::string cur(text::trim(s));
  for (;;) {
    std::string next = cur;
    for (std::size_t p; (p = next.find("\\textbf{")) != std::string::npos;) {
      const std::size_t close = next.find('}', p);
      if (close == std::string::npos) {
        next.erase(p, 8);
      } else {
        next.erase(close, 1);
        next.erase(p, 8);
      }
    }
    for (std::size_t p; (p = next.find("**")) != std::string::npos;) next.erase(p, 2);
    next = std::string(text::trim(next));
    while (!next.empty() && next.back() == '.') next.pop_back();
    next = std::string(text::trim(next));
    if (next.size() >= 2) {
      const char f = next.front(), b = next.back();
      if ((f == '"' && b == '"') || (f == '\'' && b == '\'') || (f == '_' && b == '_') || (f == '*' && b == '*')) {
        next = next.substr(1, next.size() - 2);
      }
    }
    if (next.starts_with("\xE2\x80\x9C") && next.ends_with("\xE2\x80\x9D") && next.size() >= 6) {
      next = next.substr(3, next.size() - 6);
    }
    next = std::string(text::trim(next));
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

FinalAnswer extract_final_answer(std::string_view generation, TaskKind task, LabelSet labels) {
  std::vector<std::string_view> tail;
  for (const auto& line : text::split_lines(generation)) {
    std::string_view l = text::trim(text::line_view(generation, line));
    if (!l.empty()) tail.push_back(l);
  }
  if (tail.size() > 5) tail.erase(tail.begin(), tail.end() - 5);

  std::optional<std::string_view> candidate;
  for (auto it = tail.rbegin(); it != tail.rend() && !candidate; ++it) {
    const std::string lower = text::to_lower(*it);
    const std::size_t p = lower.rfind("answer is");
    if (p != std::string::npos) candidate = it->substr(p + 9);
  }

  if (candidate) {
    std::string_view c = text::trim(*candidate);
    if (c.starts_with(':')) c = text::trim(c.substr(1));
    const std::string cleaned = strip_emphasis(c);
    switch (task) {
      case TaskKind::FactVerification:
        if (auto l = to_label(cleaned, labels)) return FinalAnswer::label(*l);
        break;
      case TaskKind::ShortQa: {
        auto parts = split_answers(cleaned);
        if (!parts.empty()) return FinalAnswer::short_form(std::move(parts));
        return FinalAnswer::missing();
      }
      case TaskKind::FreeQa:
        if (!cleaned.empty()) return FinalAnswer::free(cleaned);
        return FinalAnswer::missing();
    }
  }

  if (task == TaskKind::FactVerification && !tail.empty()) {
    std::optional<std::string> found;
    for (const auto& l : labels_of(labels)) {
      if (find_words(tail.back(), l).empty()) continue;
      if (found) return FinalAnswer::missing();  // ambiguous
      found = l;
    }
    if (found) return FinalAnswer::label(*found);
  }
  return FinalAnswer::missing();
}

}  // namespace tabreason
