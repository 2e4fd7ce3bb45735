#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabreason/table.hpp"

// The SELECT subset emitted by plan-then-reason responses:
//
//   SELECT [DISTINCT] item {, item} FROM name [WHERE pred] [;]
//   item := * | column [[AS] alias] | fn '(' (* | column) ')' [[AS] alias]
//   fn   := COUNT | SUM | AVG | MIN | MAX
//   pred := comparisons, LIKE, IN lists, combined with AND / OR / NOT
//
// The FROM name is kept but ignored: the instance table is always the source.
namespace tabreason::sql {

enum class TokenKind { Keyword, Identifier, String, Number, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  // Keywords are upper-cased; quoted identifiers and strings are unescaped.
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
  bool quoted = false;

  friend bool operator==(const Token&, const Token&) = default;
};

// Throws SqlError(UnterminatedString | UnterminatedBacktick | SyntaxError).
std::vector<Token> tokenize(std::string_view source);

struct Literal {
  enum class Kind { String, Number };
  Kind kind = Kind::String;
  // Unescaped string value, or the numeric spelling (sign included).
  std::string text;

  static Literal string(std::string value) { return {Kind::String, std::move(value)}; }
  static Literal number(std::string spelling) { return {Kind::Number, std::move(spelling)}; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class AggFn { Count, Sum, Avg, Min, Max };

std::string_view to_string(CmpOp op);
std::string_view to_string(AggFn fn);

struct ProjItem {
  enum class Kind { Star, Column, Aggregate };
  Kind kind = Kind::Star;
  std::string column;       // Column, or the aggregate argument when !arg_star
  AggFn fn = AggFn::Count;  // Aggregate only
  bool arg_star = false;    // Aggregate only: COUNT(*)
  std::optional<std::string> alias;

  static ProjItem star() { return {}; }
  static ProjItem col(std::string name, std::optional<std::string> alias = std::nullopt) {
    return {Kind::Column, std::move(name), AggFn::Count, false, std::move(alias)};
  }
  static ProjItem aggregate(AggFn fn, std::optional<std::string> column,
                            std::optional<std::string> alias = std::nullopt) {
    const bool star = !column.has_value();
    return {Kind::Aggregate, column.value_or(""), fn, star, std::move(alias)};
  }

  friend bool operator==(const ProjItem&, const ProjItem&) = default;
};

struct Pred {
  enum class Kind { Cmp, Like, In, And, Or, Not };
  Kind kind = Kind::Cmp;
  std::string column;             // Cmp, Like, In
  CmpOp op = CmpOp::Eq;           // Cmp
  Literal literal;                // Cmp; the pattern for Like
  std::vector<Literal> list;      // In
  std::vector<Pred> children;     // And/Or: 2, Not: 1

  static Pred cmp(std::string column, CmpOp op, Literal literal);
  static Pred like(std::string column, std::string pattern);
  static Pred in(std::string column, std::vector<Literal> list);
  static Pred conj(Pred a, Pred b);
  static Pred disj(Pred a, Pred b);
  static Pred negate(Pred a);

  friend bool operator==(const Pred&, const Pred&) = default;
};

struct SqlQuery {
  std::vector<ProjItem> projections;
  std::string source;
  std::optional<Pred> predicate;
  bool distinct = false;

  friend bool operator==(const SqlQuery&, const SqlQuery&) = default;
};

// Throws SqlError(SyntaxError) with the offending offset. GROUP BY, ORDER BY,
// LIMIT, JOIN and friends are rejected as unsupported clauses.
SqlQuery parse_select(const std::vector<Token>& tokens);
SqlQuery parse_select(std::string_view source);

// Canonical text: backticked identifiers, fully parenthesized predicates.
// parse_select(print(q)) == q.
std::string print(const SqlQuery& query);
std::string print(const Pred& pred);

struct ResultTable {
  std::vector<std::string> headers;
  std::vector<Row> rows;
  std::vector<std::string> warnings;

  friend bool operator==(const ResultTable& a, const ResultTable& b) {
    return a.headers == b.headers && a.rows == b.rows;
  }
};

// Filters, then projects or aggregates. Column names resolve
// case-insensitively after whitespace collapsing; the first of duplicate
// headers wins. Throws Error(UnknownColumn | AggregateMixedWithColumns).
ResultTable execute(const SqlQuery& query, const Table& table);

// tokenize + parse_select + execute.
ResultTable run(std::string_view source, const Table& table);

// "| h |" header line, then one line per row, each ending in '\n'. An empty
// result is the header followed by "(no rows)".
std::string format_result(const ResultTable& result);

// Case-insensitive LIKE with '%' and '_' wildcards over whole code points.
bool like_match(std::string_view value, std::string_view pattern);

}  // namespace tabreason::sql
