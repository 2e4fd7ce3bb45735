#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "tabreason/error.hpp"
#include "tabreason/prompt.hpp"
#include "tabreason/text.hpp"

using namespace tabreason;

TEST_SUITE("prompt") {

TEST_CASE("built-in templates are complete") {
  const auto& t = PromptTemplates::builtin();
  for (const char* name : {"short_qa.demo", "short_qa.task", "free_qa.task", "fact_three_way.demo",
                           "fact_three_way.task", "fact_true_false.demo", "fact_true_false.task", "judge"}) {
    CAPTURE(name);
    CHECK(t.has(name));
  }
  CHECK_FALSE(t.has("free_qa.demo"));
  CHECK_THROWS_AS(t.get("nope"), Error);
}

TEST_CASE("short QA prompt carries the demonstration verbatim") {
  const auto all = fixtures::cases();
  const auto& inst = fixtures::find(all, "wikitab_case");
  const auto p = build_task_prompt(inst, true);
  const std::string demo(text::trim_right(PromptTemplates::builtin().get("short_qa.demo")));
  CHECK(p.starts_with(demo + "\n\n## Question\nwho was the top chef?\n\n## Table Context\n"));
  CHECK(p.find("The final answer is **2**.") != std::string::npos);
  CHECK(p.find("| Damaris Phillips | 31 |") != std::string::npos);
  CHECK(p.find("## Sentence Context") == std::string::npos);
  CHECK(p.ends_with("\n\n## Answer\n"));

  const auto bare = build_task_prompt(inst, false);
  CHECK(bare.starts_with("## Question\n"));
  CHECK(bare.find("Kenya") == std::string::npos);
  CHECK(p.ends_with(bare));
}

TEST_CASE("fact verification prompts name the label set") {
  const auto all = fixtures::cases();
  const auto p = build_task_prompt(fixtures::find(all, "feverous_case"), true);
  CHECK(p.find("## Claim\n") != std::string::npos);
  CHECK(p.find("SUPPORTS, REFUTES, and NOT ENOUGH INFO") != std::string::npos);
  CHECK(p.find("## Sentence Context\n") != std::string::npos);
  CHECK(p.find("Therefore, the answer is **SUPPORTS**") != std::string::npos);

  Instance tf = fixtures::find(all, "tabfact_case");
  tf.tags.erase("label_set");
  tf.gold.label = "false";
  CHECK(template_stem(tf) == "fact_true_false");
  const auto q = build_task_prompt(tf, true);
  CHECK(q.find("true and false") != std::string::npos);
  CHECK(q.find("The final answer is **false**.") != std::string::npos);
}

TEST_CASE("free-form questions get no demonstration") {
  Instance i = fixtures::cases().front();
  i.task = TaskKind::FreeQa;
  const auto b = make_bundle(i, true);
  CHECK_FALSE(b.demonstration);
  CHECK(template_stem(i) == "free_qa");
}

TEST_CASE("sentences are rendered one per line with titles") {
  SentenceContext s;
  s.items.push_back({"Arc Dream Publishing", "A  publisher\nfounded in 2002."});
  s.items.push_back({std::nullopt, "Untitled."});
  CHECK(format_sentences(s) == "Arc Dream Publishing: A publisher founded in 2002.\nUntitled.");
}

TEST_CASE("table block round-trips through the table parser") {
  for (const auto& inst : fixtures::cases()) {
    const auto b = make_bundle(inst, false);
    std::string block = b.context_block.substr(std::string("## Table Context\n").size());
    block = block.substr(0, block.find("\n\n## Sentence Context"));
    CHECK(parse_pipe_table(block) == inst.table);
  }
}

TEST_CASE("overrides replace built-in templates") {
  fixtures::TempDir dir;
  {
    std::ofstream(dir / "short_qa.task.txt") << "Answer briefly.";
  }
  const auto t = PromptTemplates::with_overrides(dir.path());
  const auto all = fixtures::cases();
  const auto p = build_task_prompt(fixtures::find(all, "wikitab_case"), false, t);
  CHECK(p.find("## Task\nAnswer briefly.\n\n## Answer\n") != std::string::npos);
  CHECK_THROWS_AS(PromptTemplates::with_overrides(dir / "missing"), Error);
}

TEST_CASE("judge prompt") {
  const auto p = build_judge_prompt("How many?", {"46.5%", "0.465"}, "48%");
  CHECK(p.find("## Question\nHow many?") != std::string::npos);
  CHECK(p.find("## Gold Answer\n46.5%; 0.465") != std::string::npos);
  CHECK(p.find("## Predicted Answer\n48%") != std::string::npos);
  CHECK(p.find("{{") == std::string::npos);
  CHECK(p.find("return \"Yes\"") != std::string::npos);
  CHECK_THROWS_AS(build_judge_prompt("", {"a"}, "b"), Error);
  CHECK_THROWS_AS(build_judge_prompt("q", {}, "b"), Error);
  CHECK_THROWS_AS(build_judge_prompt("q", {"a"}, " "), Error);
}

}
