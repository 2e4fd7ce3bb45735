#include <functional>

#include "doctest.h"
#include "generators.hpp"
#include "tabreason/error.hpp"
#include "tabreason/sql.hpp"

using namespace tabreason;
using namespace tabreason::sql;

namespace {

Table goodwill() {
  return make_table({"Rank", "Name", "Nationality", "Time"},
                    {{"1", "Brahim Boulami", "Morocco", "8:17.73"},
                     {"2", "Reuben Kosgei", "Kenya", "8:18.63"},
                     {"3", "Stephen Cherono", "Kenya", "8:19.98"},
                     {"4", "Bouabdellah Tahri", "France", "8:20.25"},
                     {"5", "Tim Broe", "United States", "8:20.75"},
                     {"6", "Luis Miguel Mart\xc3\xadn", "Spain", "8:24.03"},
                     {"7", "Raymond Yator", "Kenya", "8:27.19"},
                     {"8", "Thomas Chorny", "United States", "9:24.26"}});
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("sql") {

TEST_CASE("lexer") {
  const auto t = tokenize("select `Left office`, \"x\" from w where a <= -1.5e2 and b = 'it''s';");
  CHECK(t[0].kind == TokenKind::Keyword);
  CHECK(t[0].text == "SELECT");
  CHECK(t[1].kind == TokenKind::Identifier);
  CHECK(t[1].text == "Left office");
  CHECK(t[1].quoted);
  CHECK(t[3].text == "x");
  bool saw_le = false, saw_string = false;
  for (const auto& tok : t) {
    saw_le = saw_le || (tok.kind == TokenKind::Punct && tok.text == "<=");
    saw_string = saw_string || (tok.kind == TokenKind::String && tok.text == "it's");
  }
  CHECK(saw_le);
  CHECK(saw_string);
  CHECK(t.back().kind == TokenKind::End);
}

TEST_CASE("lexer errors carry offsets") {
  try {
    tokenize("SELECT 'abc");
    FAIL("expected error");
  } catch (const SqlError& e) {
    CHECK(e.code() == ErrorCode::UnterminatedString);
    CHECK(e.position() == 7);
  }
  CHECK(code_of([] { tokenize("SELECT `a FROM w"); }) == ErrorCode::UnterminatedBacktick);
  CHECK(code_of([] { tokenize("SELECT a FROM w WHERE a ? 1"); }) == ErrorCode::SyntaxError);
}

TEST_CASE("parse the demo query") {
  const auto q = parse_select("SELECT Name, Nationality FROM Table WHERE Rank <= 3");
  REQUIRE(q.projections.size() == 2);
  CHECK(q.projections[0] == ProjItem::col("Name"));
  CHECK(q.projections[1] == ProjItem::col("Nationality"));
  CHECK(q.predicate == Pred::cmp("Rank", CmpOp::Le, Literal::number("3")));
}

TEST_CASE("parse aggregates, aliases and predicates") {
  const auto q = parse_select("SELECT COUNT(*) as Losses FROM w WHERE Result LIKE 'L%'");
  CHECK(q.projections[0] == ProjItem::aggregate(AggFn::Count, std::nullopt, "Losses"));
  CHECK(q.predicate == Pred::like("Result", "L%"));

  const auto r = parse_select(
      "SELECT DISTINCT w.`Fiscal Years` y FROM Table t WHERE `Fiscal Years` IN ('2019', 2018) AND NOT a != \"x\"");
  CHECK(r.distinct);
  CHECK(r.projections[0] == ProjItem::col("Fiscal Years", "y"));
  CHECK(r.predicate == Pred::conj(Pred::in("Fiscal Years", {Literal::string("2019"), Literal::number("2018")}),
                                  Pred::negate(Pred::cmp("a", CmpOp::Ne, Literal::string("x")))));
  CHECK(parse_select("SELECT a FROM w WHERE a NOT LIKE 'x%'").predicate ==
        Pred::negate(Pred::like("a", "x%")));
  CHECK(parse_select("SELECT a FROM w WHERE a NOT IN (1)").predicate ==
        Pred::negate(Pred::in("a", {Literal::number("1")})));
  CHECK(parse_select("SELECT a FROM w WHERE a <> - 2").predicate == Pred::cmp("a", CmpOp::Ne, Literal::number("-2")));
}

TEST_CASE("AND binds tighter than OR") {
  const auto q = parse_select("SELECT a FROM w WHERE a = 1 OR b = 2 AND c = 3");
  CHECK(q.predicate == Pred::disj(Pred::cmp("a", CmpOp::Eq, Literal::number("1")),
                                  Pred::conj(Pred::cmp("b", CmpOp::Eq, Literal::number("2")),
                                             Pred::cmp("c", CmpOp::Eq, Literal::number("3")))));
}

TEST_CASE("unsupported and malformed statements") {
  for (const char* s : {"SELECT a FROM w GROUP BY a", "SELECT a FROM w ORDER BY a", "SELECT a FROM w LIMIT 3",
                        "SELECT a FROM w JOIN v", "SELECT a FROM", "SELECT FROM w", "SELECT a, * FROM w",
                        "SELECT a FROM w WHERE", "SELECT COUNT(DISTINCT a) FROM w", "SELECT a FROM w x y z",
                        "UPDATE w SET a = 1", "SELECT a FROM w WHERE a LIKE 3", ""}) {
    CAPTURE(s);
    CHECK_THROWS_AS(parse_select(s), SqlError);
  }
  try {
    parse_select("SELECT a FROM w ORDER BY a");
  } catch (const SqlError& e) {
    CHECK(std::string(e.what()).find("ORDER BY") != std::string::npos);
    CHECK(e.position() == 16);
  }
}

TEST_CASE("print is canonical") {
  const auto q = parse_select("select count(*) n from w where (a = 'x' or b > 2) and not c like '%y'");
  CHECK(print(q) == "SELECT COUNT(*) AS `n` FROM `w` WHERE ((`a` = 'x' OR `b` > 2) AND NOT (`c` LIKE '%y'))");
}

TEST_CASE("parse(print(q)) == q on generated queries") {
  gen::Rng rng(5);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    const auto c = gen::random_sql_case(rng);
    const auto q = parse_select(c.sql);
    const auto text = print(q);
    CAPTURE(c.sql);
    CAPTURE(text);
    CHECK(parse_select(text) == q);
    CHECK(print(parse_select(text)) == text);
    ++checked;
  }
  CHECK(checked == 400);
}

TEST_CASE("execute: Rank <= 3 follows relational semantics") {
  const auto r = run("SELECT Name, Nationality FROM Table WHERE Rank <= 3", goodwill());
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0][0].raw() == "Brahim Boulami");
  CHECK(r.rows[2][1].raw() == "Kenya");
  CHECK(format_result(r) ==
        "| Name | Nationality |\n| Brahim Boulami | Morocco |\n| Reuben Kosgei | Kenya |\n"
        "| Stephen Cherono | Kenya |\n");
}

TEST_CASE("execute: aggregates") {
  const auto t = goodwill();
  auto r = run("SELECT COUNT(*) FROM w WHERE Nationality = 'kenya'", t);
  CHECK(r.headers == std::vector<std::string>{"COUNT(*)"});
  CHECK(r.rows[0][0].raw() == "3");
  r = run("SELECT SUM(Rank) AS s, AVG(rank), MIN(Rank), MAX(Rank) FROM w", t);
  CHECK(r.headers == std::vector<std::string>{"s", "AVG(rank)", "MIN(Rank)", "MAX(Rank)"});
  CHECK(r.rows[0][0].raw() == "36");
  CHECK(r.rows[0][1].raw() == "4.5");
  CHECK(r.rows[0][2].raw() == "1");
  CHECK(r.rows[0][3].raw() == "8");
  r = run("SELECT MAX(Name) FROM w", t);
  CHECK(r.rows[0][0].raw().empty());
  r = run("SELECT COUNT(Name) FROM w WHERE Rank > 100", t);
  CHECK(r.rows[0][0].raw() == "0");
}

TEST_CASE("execute: errors") {
  const auto t = goodwill();
  CHECK(code_of([&] { run("SELECT Nope FROM w", t); }) == ErrorCode::UnknownColumn);
  CHECK(code_of([&] { run("SELECT Name FROM w WHERE Nope = 1", make_table({"Name"}, {})); }) ==
        ErrorCode::UnknownColumn);
  CHECK(code_of([&] { run("SELECT Name, COUNT(*) FROM w", t); }) == ErrorCode::AggregateMixedWithColumns);
  // The "column0" mistake: a header that does not exist.
  CHECK(code_of([&] { run("SELECT column0 FROM w WHERE column0 = 'Georgia Southern'", t); }) ==
        ErrorCode::UnknownColumn);
}

TEST_CASE("execute: names, strings and distinct") {
  const auto t = make_table({"Left  office", "Name"}, {{"December 31 , 1849", "Freeborn G. Jewett"},
                                                        {"1850", "A"}, {"1850", "a"}});
  auto r = run("SELECT `left office` FROM w WHERE `Name` = 'freeborn g. jewett'", t);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0][0].raw() == "December 31 , 1849");
  CHECK(r.headers[0] == "Left  office");
  r = run("SELECT DISTINCT `Left office` FROM w", t);
  CHECK(r.rows.size() == 2);
  r = run("SELECT DISTINCT Name FROM w WHERE Name = \"A\"", t);
  CHECK(r.rows.size() == 2);
  r = run("SELECT * FROM w WHERE Name = 'zzz'", t);
  CHECK(format_result(r) == "| Left  office | Name |\n(no rows)\n");
}

TEST_CASE("numeric-first comparison") {
  const auto t = make_table({"v"}, {{"1,000"}, {"9"}, {"50%"}, {"abc"}});
  // "abc" against "10" falls back to string order.
  CHECK(run("SELECT v FROM w WHERE v > 10", t).rows.size() == 2);
  CHECK(run("SELECT v FROM w WHERE v < 1", t).rows.size() == 1);
  CHECK(run("SELECT v FROM w WHERE v = '1000'", t).rows.size() == 1);
  CHECK(run("SELECT v FROM w WHERE v > 'ab'", t).rows.size() == 1);
}

TEST_CASE("like_match") {
  CHECK(like_match("Lost 7-10", "L%"));
  CHECK(like_match("lost", "LOST"));
  CHECK(like_match("abc", "a_c"));
  CHECK(like_match("Mart\xc3\xadn", "Mart_n"));
  CHECK(like_match("abcabc", "%bc"));
  CHECK(like_match("", "%"));
  CHECK_FALSE(like_match("abc", "ab"));
  CHECK_FALSE(like_match("", "_"));
  CHECK(like_match("aXbXc", "a%b%c"));
  CHECK_FALSE(like_match("aXbX", "a%b%c"));
}

TEST_CASE("engine agrees with the oracle") {
  gen::Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    const auto c = gen::random_sql_case(rng);
    const auto diff = gen::compare_with_engine(c);
    CHECK_MESSAGE(!diff, (diff ? *diff : ""));
  }
}

}
