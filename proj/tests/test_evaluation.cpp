#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "tabreason/error.hpp"
#include "tabreason/evaluation.hpp"

using namespace tabreason;

namespace {

using V = std::vector<std::string>;

Instance qa(const std::string& id, V gold, std::map<std::string, std::string> tags = {}) {
  Instance i;
  i.id = id;
  i.query = "q " + id;
  i.table = make_table({"a"}, {{"1"}});
  i.gold.answers = std::move(gold);
  i.tags = std::move(tags);
  return i;
}

Instance fact(const std::string& id, const std::string& label) {
  Instance i = qa(id, {});
  i.task = TaskKind::FactVerification;
  i.gold.label = label;
  return i;
}

RunResult result(const std::string& id, FinalAnswer a, int calls = 2, Status status = Status::Ok) {
  RunResult r;
  r.outcome.instance_id = r.trace.instance_id = id;
  r.outcome.final_answer = r.trace.final_answer = std::move(a);
  r.outcome.api_calls = r.trace.api_calls = calls;
  r.outcome.status = status;
  return r;
}

ScriptEntry say(std::string t) { return {std::nullopt, {std::move(t), FinishReason::Stop}}; }

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("normalize_answer") {
  CHECK(normalize_answer("**2**.") == "2");
  CHECK(normalize_answer("December 31, 1849") == normalize_answer("december 31 , 1849"));
  CHECK(normalize_answer("  Damaris   Phillips ") == "damaris phillips");
  CHECK(normalize_answer("2.0") == "2");
  CHECK(normalize_answer("1,000") == "1000");
  CHECK(normalize_answer("( a )") == "(a)");
  CHECK(normalize_answer("\"**x**\"") == "x");
}

TEST_CASE("denotation_match") {
  CHECK(denotation_match(V{"2"}, V{"2"}));
  CHECK_FALSE(denotation_match(V{"48%"}, V{"46.5%"}));
  CHECK(denotation_match(V{"a", "b"}, V{"b", "a"}));
  CHECK_FALSE(denotation_match(V{"a", "a"}, V{"a"}));
  CHECK(denotation_match(V{"December 31", "1849"}, V{"December 31, 1849"}));
  CHECK_FALSE(denotation_match(V{}, V{"x"}));
  CHECK_FALSE(denotation_match(V{"x"}, V{}));
}

TEST_CASE("labels and correctness") {
  CHECK(canonical_label("true") == "SUPPORTS");
  CHECK(canonical_label("False") == "REFUTES");
  CHECK(canonical_label("not enough info") == "NOT ENOUGH INFO");
  CHECK(is_correct(FinalAnswer::label("true"), fact("f", "SUPPORTS")));
  CHECK(is_correct(FinalAnswer::label("REFUTES"), fact("f", "false")));
  CHECK_FALSE(is_correct(FinalAnswer::label("SUPPORTS"), fact("f", "NOT ENOUGH INFO")));
  CHECK_FALSE(is_correct(FinalAnswer::missing(), qa("x", {"1"})));
  CHECK(is_correct(FinalAnswer::short_form({"1.0"}), qa("x", {"1"})));
  Instance free = qa("f", {"Peralta scored four goals.", "He played well"});
  free.task = TaskKind::FreeQa;
  CHECK(is_correct(FinalAnswer::free("he played well"), free));
  CHECK(answer_text(FinalAnswer::short_form({"a", "b"})) == "a, b");
}

TEST_CASE("hand-built confusion gives 22/45") {
  const V gold = {"SUPPORTS", "SUPPORTS", "REFUTES", "REFUTES", "NOT ENOUGH INFO"};
  const V pred = {"SUPPORTS", "SUPPORTS", "REFUTES", "NOT ENOUGH INFO", "SUPPORTS"};
  const auto f = three_class_f1(pred, gold);
  CHECK(std::fabs(f.macro - 22.0 / 45.0) < 1e-12);
  CHECK(f.per_class.at("SUPPORTS") == doctest::Approx(0.8));
  CHECK(f.per_class.at("REFUTES") == doctest::Approx(2.0 / 3.0));
  CHECK(f.per_class.at("NOT ENOUGH INFO") == 0.0);
  CHECK(three_class_f1(gold, gold).macro == 1.0);
}

TEST_CASE("F1 edge cases") {
  CHECK_THROWS_AS(three_class_f1(V{}, V{}), Error);
  CHECK_THROWS_AS(three_class_f1(V{"SUPPORTS"}, V{"SUPPORTS", "REFUTES"}), Error);
  const auto f = three_class_f1(V{"true", "false"}, V{"SUPPORTS", "REFUTES"});
  CHECK(f.per_class.at("SUPPORTS") == 1.0);
  CHECK(f.absent == V{"NOT ENOUGH INFO"});
  const V cls = {"a", "b"};
  CHECK(macro_f1(V{"a", "b"}, V{"a", "a"}, cls).macro == doctest::Approx((2.0 / 3.0 + 0.0) / 2.0));
}

TEST_CASE("verdicts") {
  CHECK(parse_verdict("Yes").verdict == Verdict::Yes);
  CHECK(parse_verdict("No.").verdict == Verdict::No);
  CHECK(parse_verdict("**yes**, it is").verdict == Verdict::Yes);
  CHECK(parse_verdict("Maybe").verdict == Verdict::Unparseable);
  CHECK(parse_verdict("").verdict == Verdict::Unparseable);
  CHECK(parse_verdict("Maybe").raw == "Maybe");

  ReplayBackend b({say("Yes"), say("No."), say("Maybe")}, ReplayMode::Sequence);
  CHECK(judge_verdict("q", {"g"}, "p", b).verdict == Verdict::Yes);
  CHECK(judge_verdict("q", {"g"}, "p", b).verdict == Verdict::No);
  CHECK(judge_verdict("q", {"g"}, "p", b).verdict == Verdict::Unparseable);
}

TEST_CASE("report: accuracy, api calls and tag split") {
  const std::vector<Instance> inst = {qa("a", {"1"}, {{"src", "x"}}), qa("b", {"2"}, {{"src", "x"}}),
                                      qa("c", {"3"}, {{"src", "y"}}), qa("d", {"4"}, {{"src", "y"}})};
  const std::vector<RunResult> res = {result("a", FinalAnswer::short_form({"1"})),
                                      result("b", FinalAnswer::short_form({"2"})),
                                      result("c", FinalAnswer::short_form({"3"})),
                                      result("d", FinalAnswer::short_form({"5"}))};
  const auto rep = build_report(res, inst);
  CHECK(rep.evaluated == 4);
  CHECK(rep.correct == 3);
  CHECK(rep.accuracy == 0.75);
  CHECK(rep.mean_api_calls == 2.0);
  REQUIRE(rep.breakdowns.size() == 2);
  CHECK(rep.breakdowns[0].count + rep.breakdowns[1].count == 4);
  CHECK(rep.breakdowns[0].value == "x");
  CHECK(rep.breakdowns[0].accuracy == 1.0);
  CHECK(rep.breakdowns[1].accuracy == 0.5);

  const auto j = report_to_json(rep);
  CHECK(j["accuracy"] == 0.75);
  CHECK(j["breakdowns"].size() == 2);
  const auto text = report_to_text(rep);
  CHECK(text.find("accuracy               0.7500") != std::string::npos);
}

TEST_CASE("report: failures, missing answers, F1 and judge") {
  const std::vector<Instance> inst = {fact("s", "SUPPORTS"), fact("r", "REFUTES"), fact("n", "NOT ENOUGH INFO"),
                                      qa("q", {"46.5%"})};
  const std::vector<RunResult> res = {
      result("s", FinalAnswer::label("SUPPORTS")), result("r", FinalAnswer::missing(), 1, Status::BackendError),
      result("n", FinalAnswer::label("SUPPORTS")), result("q", FinalAnswer::short_form({"48%"}))};
  ReplayBackend judge({say("Yes"), say("No"), say("Yes")}, ReplayMode::Sequence);
  ReportOptions opt;
  opt.three_class_f1 = true;
  opt.judge = &judge;
  opt.group_by = {"missing_tag"};
  const auto rep = build_report(res, inst, opt);
  CHECK(rep.failed == 1);
  CHECK(rep.missing == 1);
  CHECK(rep.correct == 1);
  REQUIRE(rep.f1);
  CHECK(rep.f1->per_class.at("SUPPORTS") == doctest::Approx(2.0 / 3.0));
  CHECK(judge.calls() == 3);
  CHECK(rep.judge_accuracy == doctest::Approx(0.5));
  REQUIRE(rep.breakdowns.size() == 1);
  CHECK(rep.breakdowns[0].value == "(none)");
}

TEST_CASE("report: id mismatches") {
  const std::vector<Instance> inst = {qa("a", {"1"})};
  CHECK_THROWS_AS(build_report(std::vector<RunResult>{result("zzz", FinalAnswer::missing())}, inst), Error);
  CHECK_THROWS_AS(build_report(std::vector<RunResult>{result("a", FinalAnswer::missing()),
                                                      result("a", FinalAnswer::missing())},
                               inst),
                  Error);
}

}
