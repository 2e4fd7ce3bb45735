#include <fstream>
#include <sstream>

#include "tabreason/error.hpp"
#include "tabreason/prompt.hpp"
#include "tabreason/text.hpp"

namespace tabreason {

namespace detail {
const std::map<std::string, std::string>& embedded_templates();
}

const PromptTemplates& PromptTemplates::builtin() {
  static const PromptTemplates t = [] {
    PromptTemplates p;
    for (const auto& [name, body] : detail::embedded_templates()) p.set(name, body);
    return p;
  }();
  return t;
}

PromptTemplates PromptTemplates::with_overrides(const std::filesystem::path& dir) {
  PromptTemplates p = builtin();
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::IoFailure, "template directory not found: " + dir.string());
  }
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto& path = entry.path();
    if (!entry.is_regular_file() || path.extension() != ".txt") continue;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    p.set(path.stem().string(), ss.str());
  }
  return p;
}

const std::string& PromptTemplates::get(const std::string& name) const {
  auto it = texts_.find(name);
  if (it == texts_.end()) throw Error(ErrorCode::UnsupportedTask, "no prompt template named '" + name + "'");
  return it->second;
}

std::string PromptBundle::assemble() const {
  std::string out;
  if (demonstration) out += std::string(text::trim_right(*demonstration)) + "\n\n";
  out += question_block + "\n\n";
  out += context_block + "\n\n";
  out += "## Task\n" + instruction + "\n\n";
  out += "## Answer\n";
  return out;
}

std::string template_stem(const Instance& instance) {
  switch (instance.task) {
    case TaskKind::ShortQa: return "short_qa";
    case TaskKind::FreeQa: return "free_qa";
    case TaskKind::FactVerification:
      return instance.label_set() == LabelSet::TrueFalse ? "fact_true_false" : "fact_three_way";
  }
  throw Error(ErrorCode::UnsupportedTask, "unknown task");
}

std::string format_sentences(const SentenceContext& sentences) {
  std::vector<std::string> lines;
  for (const auto& s : sentences.items) {
    std::string body = text::collapse_whitespace(s.text);
    lines.push_back(s.title ? *s.title + ": " + body : body);
  }
  return text::join(lines, "\n");
}

PromptBundle make_bundle(const Instance& instance, bool include_demo, const PromptTemplates& templates) {
  const std::string stem = template_stem(instance);
  PromptBundle b;
  if (include_demo && templates.has(stem + ".demo")) b.demonstration = templates.get(stem + ".demo");
  b.instruction = std::string(text::trim_right(templates.get(stem + ".task")));
  const char* heading = instance.task == TaskKind::FactVerification ? "## Claim\n" : "## Question\n";
  b.question_block = heading + std::string(text::trim(instance.query));
  b.context_block = "## Table Context\n" + serialize_for_prompt(instance.table);
  if (!instance.sentences.empty()) {
    b.context_block += "\n\n## Sentence Context\n" + format_sentences(instance.sentences);
  }
  return b;
}

std::string build_task_prompt(const Instance& instance, bool include_demo, const PromptTemplates& templates) {
  return make_bundle(instance, include_demo, templates).assemble();
}

std::string build_judge_prompt(const std::string& question, const std::vector<std::string>& gold,
                               const std::string& predicted, const PromptTemplates& templates) {
  const std::string gold_text = text::join(gold, "; ");
  if (text::trim(question).empty() || text::trim(gold_text).empty() || text::trim(predicted).empty()) {
    throw Error(ErrorCode::InvalidArgument, "judge prompt needs a question, a gold answer and a prediction");
  }
  std::string out = templates.get("judge");
  auto fill = [&out](std::string_view slot, const std::string& value) {
    for (std::size_t p = out.find(slot); p != std::string::npos; p = out.find(slot, p + value.size())) {
      out.replace(p, slot.size(), value);
    }
  };
  fill("{{question}}", question);
  fill("{{gold}}", gold_text);
  fill("{{predicted}}", predicted);
  return out;
}

}  // namespace tabreason
