#include "tabreason/error.hpp"
#include "tabreason/sql.hpp"
#include "tabreason/text.hpp"

namespace tabreason::sql {

Pred Pred::cmp(std::string column, CmpOp op, Literal literal) {
  Pred p;
  p.kind = Kind::Cmp;
  p.column = std::move(column);
  p.op = op;
  p.literal = std::move(literal);
  return p;
}

Pred Pred::like(std::string column, std::string pattern) {
  Pred p;
  p.kind = Kind::Like;
  p.column = std::move(column);
  p.literal = Literal::string(std::move(pattern));
  return p;
}

Pred Pred::in(std::string column, std::vector<Literal> list) {
  Pred p;
  p.kind = Kind::In;
  p.column = std::move(column);
  p.list = std::move(list);
  return p;
}

Pred Pred::conj(Pred a, Pred b) {
  Pred p;
  p.kind = Kind::And;
  p.children.push_back(std::move(a));
  p.children.push_back(std::move(b));
  return p;
}

Pred Pred::disj(Pred a, Pred b) {
  Pred p;
  p.kind = Kind::Or;
  p.children.push_back(std::move(a));
  p.children.push_back(std::move(b));
  return p;
}

Pred Pred::negate(Pred a) {
  Pred p;
  p.kind = Kind::Not;
  p.children.push_back(std::move(a));
  return p;
}

namespace {

std::optional<AggFn> aggregate_named(std::string_view name) {
  if (text::iequals(name, "count")) return AggFn::Count;
  if (text::iequals(name, "sum")) return AggFn::Sum;
  if (text::iequals(name, "avg")) return AggFn::Avg;
  if (text::iequals(name, "min")) return AggFn::Min;
  if (text::iequals(name, "max")) return AggFn::Max;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {
    if (tokens_.empty() || tokens_.back().kind != TokenKind::End) {
      throw SqlError(ErrorCode::SyntaxError, "token stream is not terminated", 0);
    }
  }

  SqlQuery parse() {
    SqlQuery q;
    expect_keyword("SELECT");
    if (accept_keyword("DISTINCT")) q.distinct = true;
    q.projections = parse_projections();
    expect_keyword("FROM");
    q.source = parse_source();
    if (accept_keyword("WHERE")) q.predicate = parse_or();
    reject_unsupported();
    accept_punct(";");
    if (peek().kind != TokenKind::End) fail("unexpected '" + peek().text + "' after query");
    return q;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& advance() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw SqlError(ErrorCode::SyntaxError, message, peek().begin);
  }

  bool is_keyword(std::string_view kw, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Keyword && peek(ahead).text == kw;
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Punct && peek(ahead).text == p;
  }
  bool accept_keyword(std::string_view kw) {
    if (!is_keyword(kw)) return false;
    advance();
    return true;
  }
  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    advance();
    return true;
  }
  void expect_keyword(std::string_view kw) {
    reject_unsupported();
    if (!accept_keyword(kw)) fail("expected " + std::string(kw) + describe_found());
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'" + describe_found());
  }

  std::string describe_found() const {
    if (peek().kind == TokenKind::End) return ", found end of query";
    return ", found '" + peek().text + "'";
  }

  void reject_unsupported() const {
    static constexpr const char* kUnsupported[] = {"GROUP", "ORDER", "LIMIT", "JOIN", "HAVING",
                                                   "UNION", "OFFSET", "BETWEEN", "IS"};
    if (peek().kind != TokenKind::Keyword) return;
    for (const char* kw : kUnsupported) {
      if (peek().text == kw) {
        std::string clause = kw;
        if (clause == "GROUP" || clause == "ORDER") clause += " BY";
        fail("unsupported clause " + clause);
      }
    }
  }

  std::string expect_identifier(std::string_view what) {
    if (peek().kind != TokenKind::Identifier) fail("expected " + std::string(what) + describe_found());
    return advance().text;
  }

  // column or qualifier.column
  std::string parse_column() {
    std::string name = expect_identifier("column name");
    if (is_punct(".") && peek(1).kind == TokenKind::Identifier) {
      advance();
      name = advance().text;
    }
    return name;
  }

  std::optional<std::string> parse_alias() {
    if (accept_keyword("AS")) return expect_identifier("alias");
    if (peek().kind == TokenKind::Identifier) return advance().text;
    return std::nullopt;
  }

  std::vector<ProjItem> parse_projections() {
    std::vector<ProjItem> items;
    if (is_keyword("FROM") || peek().kind == TokenKind::End) fail("missing projection list");
    do {
      if (accept_punct("*")) {
        items.push_back(ProjItem::star());
      } else if (peek().kind == TokenKind::Identifier && is_punct("(", 1)) {
        const Token& name = advance();
        auto fn = aggregate_named(name.text);
        if (!fn || name.quoted) {
          throw SqlError(ErrorCode::SyntaxError, "unsupported function '" + name.text + "'", name.begin);
        }
        advance();  // (
        std::optional<std::string> arg;
        if (is_keyword("DISTINCT")) fail("DISTINCT inside aggregates is not supported");
        if (accept_punct("*")) {
          if (*fn != AggFn::Count) fail(std::string(to_string(*fn)) + " needs a column argument");
        } else {
          arg = parse_column();
        }
        expect_punct(")");
        items.push_back(ProjItem::aggregate(*fn, std::move(arg), parse_alias()));
      } else {
        std::string column = parse_column();
        items.push_back(ProjItem::col(std::move(column), parse_alias()));
      }
    } while (accept_punct(","));
    bool has_star = false;
    for (const auto& it : items) has_star = has_star || it.kind == ProjItem::Kind::Star;
    if (has_star && items.size() > 1) {
      throw SqlError(ErrorCode::SyntaxError, "'*' must be the only projection", tokens_[0].begin);
    }
    return items;
  }

  std::string parse_source() {
    std::string source = expect_identifier("table name");
    if (is_punct(".") && peek(1).kind == TokenKind::Identifier) {
      advance();
      source += "." + advance().text;
    }
    if (peek().kind == TokenKind::Identifier) advance();  // table alias
    if (is_punct(",")) fail("multi-table FROM is not supported");
    if (is_keyword("JOIN") || (peek().kind == TokenKind::Identifier && is_keyword("JOIN", 1))) {
      fail("unsupported clause JOIN");
    }
    return source;
  }

  Pred parse_or() {
    Pred left = parse_and();
    while (accept_keyword("OR")) left = Pred::disj(std::move(left), parse_and());
    return left;
  }

  Pred parse_and() {
    Pred left = parse_unary();
    while (accept_keyword("AND")) left = Pred::conj(std::move(left), parse_unary());
    return left;
  }

  Pred parse_unary() {
    if (accept_keyword("NOT")) return Pred::negate(parse_unary());
    return parse_primary();
  }

  Pred parse_primary() {
    reject_unsupported();
    if (accept_punct("(")) {
      Pred inner = parse_or();
      expect_punct(")");
      return inner;
    }
    if (peek().kind == TokenKind::End) fail("dangling WHERE: expected a condition");
    if (peek().kind != TokenKind::Identifier) fail("expected a column on the left of a condition" + describe_found());
    std::string column = parse_column();
    reject_unsupported();

    bool negated = false;
    if (is_keyword("NOT") && (is_keyword("LIKE", 1) || is_keyword("IN", 1))) {
      advance();
      negated = true;
    }
    Pred p;
    if (accept_keyword("LIKE")) {
      if (peek().kind != TokenKind::String) fail("LIKE needs a quoted pattern" + describe_found());
      p = Pred::like(std::move(column), advance().text);
    } else if (accept_keyword("IN")) {
      expect_punct("(");
      std::vector<Literal> list;
      do {
        list.push_back(parse_literal());
      } while (accept_punct(","));
      expect_punct(")");
      p = Pred::in(std::move(column), std::move(list));
    } else {
      CmpOp op = parse_cmp_op();
      p = Pred::cmp(std::move(column), op, parse_literal());
    }
    return negated ? Pred::negate(std::move(p)) : p;
  }

  CmpOp parse_cmp_op() {
    if (peek().kind == TokenKind::Punct) {
      const std::string& t = peek().text;
      std::optional<CmpOp> op;
      if (t == "=" || t == "==") op = CmpOp::Eq;
      else if (t == "!=" || t == "<>") op = CmpOp::Ne;
      else if (t == "<") op = CmpOp::Lt;
      else if (t == "<=") op = CmpOp::Le;
      else if (t == ">") op = CmpOp::Gt;
      else if (t == ">=") op = CmpOp::Ge;
      if (op) {
        advance();
        return *op;
      }
    }
    fail("expected a comparison operator" + describe_found());
  }

  Literal parse_literal() {
    if (peek().kind == TokenKind::String) return Literal::string(advance().text);
    // A quoted name where a value belongs is read as a string, which is what
    // SQLite does with WHERE name = "x".
    if (peek().kind == TokenKind::Identifier && peek().quoted) return Literal::string(advance().text);
    std::string sign;
    if (is_punct("-") || is_punct("+")) {
      if (peek(1).kind != TokenKind::Number) {
        advance();
        fail("expected a number after sign" + describe_found());
      }
      if (advance().text == "-") sign = "-";
    }
    if (peek().kind == TokenKind::Number) return Literal::number(sign + advance().text);
    if (peek().kind == TokenKind::End) fail("expected a literal, found end of query");
    fail("expected a quoted string or number" + describe_found());
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

SqlQuery parse_select(const std::vector<Token>& tokens) { return Parser(tokens).parse(); }

SqlQuery parse_select(std::string_view source) { return parse_select(tokenize(source)); }

}  // namespace tabreason::sql
