#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tabreason/instance.hpp"

namespace tabreason {

// Named prompt texts: "<task>.task" instructions, "<task>.demo" worked
// examples and "judge". The built-in set is compiled from data/templates.
class PromptTemplates {
 public:
  static const PromptTemplates& builtin();

  // Built-in texts, with every *.txt in `dir` replacing the entry of the same
  // name. Throws Error(IoFailure).
  static PromptTemplates with_overrides(const std::filesystem::path& dir);

  // Throws Error(UnsupportedTask) for an unknown name.
  const std::string& get(const std::string& name) const;
  bool has(const std::string& name) const { return texts_.count(name) != 0; }

  void set(std::string name, std::string text) { texts_[std::move(name)] = std::move(text); }

 private:
  std::map<std::string, std::string> texts_;
};

struct PromptBundle {
  std::optional<std::string> demonstration;
  std::string question_block;  // "## Question" or "## Claim" section
  std::string context_block;   // table section, then the sentence section if any
  std::string instruction;     // body of "## Task"

  std::string assemble() const;
};

// "short_qa", "fact_three_way", "fact_true_false" or "free_qa".
std::string template_stem(const Instance& instance);

std::string format_sentences(const SentenceContext& sentences);

PromptBundle make_bundle(const Instance& instance, bool include_demo,
                         const PromptTemplates& templates = PromptTemplates::builtin());

std::string build_task_prompt(const Instance& instance, bool include_demo,
                              const PromptTemplates& templates = PromptTemplates::builtin());

// Gold answers are joined with "; ". Throws Error(InvalidArgument) when any
// part is empty.
std::string build_judge_prompt(const std::string& question, const std::vector<std::string>& gold,
                               const std::string& predicted,
                               const PromptTemplates& templates = PromptTemplates::builtin());

}  // namespace tabreason
