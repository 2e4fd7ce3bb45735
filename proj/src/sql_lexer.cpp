#include <array>

#include "tabreason/error.hpp"
#include "tabreason/sql.hpp"
#include "tabreason/text.hpp"

namespace tabreason::sql {

namespace {

constexpr std::array kKeywords = {
    "SELECT", "DISTINCT", "FROM", "WHERE", "AND", "OR", "NOT", "LIKE", "IN", "AS",
    // Recognized only so the parser can reject them by name.
    "GROUP", "ORDER", "LIMIT", "JOIN", "HAVING", "UNION", "OFFSET", "BETWEEN", "IS",
};

bool is_keyword(std::string_view upper) {
  for (const char* k : kKeywords) {
    if (upper == k) return true;
  }
  return false;
}

bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

bool ident_char(unsigned char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

bool digit(char c) { return c >= '0' && c <= '9'; }

// Reads a quoted run starting at `pos` (which holds the quote). A doubled
// quote stands for one literal quote. Returns the unescaped text and moves
// `pos` past the closing quote, or returns nullopt if the run is unclosed.
std::optional<std::string> read_quoted(std::string_view src, std::size_t& pos, char quote) {
  std::string out;
  std::size_t i = pos + 1;
  while (i < src.size()) {
    if (src[i] == quote) {
      if (i + 1 < src.size() && src[i + 1] == quote) {
        out.push_back(quote);
        i += 2;
        continue;
      }
      pos = i + 1;
      return out;
    }
    out.push_back(src[i]);
    ++i;
  }
  return std::nullopt;
}

}  // namespace

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (c == '`' || c == '"') {
      auto value = read_quoted(src, i, c);
      if (!value) {
        if (c == '`') throw SqlError(ErrorCode::UnterminatedBacktick, "unterminated `identifier`", start);
        throw SqlError(ErrorCode::UnterminatedString, "unterminated \"identifier\"", start);
      }
      tokens.push_back({TokenKind::Identifier, std::move(*value), start, i, true});
      continue;
    }
    if (c == '\'') {
      auto value = read_quoted(src, i, '\'');
      if (!value) throw SqlError(ErrorCode::UnterminatedString, "unterminated string literal", start);
      tokens.push_back({TokenKind::String, std::move(*value), start, i, true});
      continue;
    }
    if (digit(c) || (c == '.' && i + 1 < src.size() && digit(src[i + 1]))) {
      while (i < src.size() && digit(src[i])) ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        while (i < src.size() && digit(src[i])) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && digit(src[j])) {
          i = j;
          while (i < src.size() && digit(src[i])) ++i;
        }
      }
      tokens.push_back({TokenKind::Number, std::string(src.substr(start, i - start)), start, i, false});
      continue;
    }
    if (ident_start(static_cast<unsigned char>(c))) {
      while (i < src.size() && ident_char(static_cast<unsigned char>(src[i]))) ++i;
      std::string word(src.substr(start, i - start));
      std::string upper = text::to_upper(word);
      if (is_keyword(upper)) {
        tokens.push_back({TokenKind::Keyword, std::move(upper), start, i, false});
      } else {
        tokens.push_back({TokenKind::Identifier, std::move(word), start, i, false});
      }
      continue;
    }
    auto two = src.substr(i, 2);
    if (two == "<=" || two == ">=" || two == "!=" || two == "<>" || two == "==") {
      i += 2;
      tokens.push_back({TokenKind::Punct, std::string(two), start, i, false});
      continue;
    }
    switch (c) {
      case '(': case ')': case ',': case '*': case ';': case '.':
      case '=': case '<': case '>': case '+': case '-':
        ++i;
        tokens.push_back({TokenKind::Punct, std::string(1, c), start, i, false});
        continue;
      default:
        throw SqlError(ErrorCode::SyntaxError, std::string("unexpected character '") + c + "'", start);
    }
  }
  tokens.push_back({TokenKind::End, "", src.size(), src.size(), false});
  return tokens;
}

}  // namespace tabreason::sql
