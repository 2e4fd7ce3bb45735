#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabreason/backend.hpp"
#include "tabreason/instance.hpp"
#include "tabreason/orchestrator.hpp"
#include "tabreason/prompt.hpp"
#include "tabreason/response.hpp"

namespace tabreason {

// Lowercased, emphasis/quotes/trailing periods removed, whitespace collapsed,
// no space before ",.;:!?)" or after "(", and the whole string rewritten as a
// canonical number when it reads as one ("2,000" -> "2000", "48%" -> "0.48").
// Idempotent.
std::string normalize_answer(std::string_view text);

// Multiset equality after normalization, or equality of the two lists joined
// with ", " (an answer that itself contains a comma gets split on
// extraction). An empty gold list never matches.
bool denotation_match(std::span<const std::string> predicted, std::span<const std::string> gold);

// Upper-cased verdict in the three-way vocabulary: true -> SUPPORTS,
// false -> REFUTES. Other text is upper-cased and whitespace-collapsed.
std::string canonical_label(std::string_view label);

// Labels compare through canonical_label, short answers through
// denotation_match, free answers as one normalized string against any gold
// answer. Missing answers are never correct.
bool is_correct(const FinalAnswer& answer, const Instance& instance);

// Text handed to the judge for a prediction.
std::string answer_text(const FinalAnswer& answer);

struct F1Result {
  double macro = 0.0;
  std::map<std::string, double> per_class;
  // Classes that occur in neither sequence; they count as 0 in the average.
  std::vector<std::string> absent;
};

// Macro-averaged F1 over `classes`. Throws Error(LengthMismatch) for unequal
// lengths and Error(EmptyInput) for empty sequences.
F1Result macro_f1(std::span<const std::string> predicted, std::span<const std::string> gold,
                  std::span<const std::string> classes);

// macro_f1 over SUPPORTS / REFUTES / NOT ENOUGH INFO after canonical_label.
F1Result three_class_f1(std::span<const std::string> predicted, std::span<const std::string> gold);

enum class Verdict { Yes, No, Unparseable };

std::string_view to_string(Verdict verdict);

struct JudgeVerdict {
  Verdict verdict = Verdict::Unparseable;
  std::string raw;
};

JudgeVerdict parse_verdict(std::string_view generation);

// One generation with the judge prompt. Backend errors propagate.
JudgeVerdict judge_verdict(const std::string& question, const std::vector<std::string>& gold,
                           const std::string& predicted, Backend& backend,
                           const PromptTemplates& templates = PromptTemplates::builtin());

struct ReportOptions {
  bool three_class_f1 = false;
  // When set, every answered instance is also graded by the judge.
  Backend* judge = nullptr;
  // Tag keys to break accuracy down by; empty means every key seen.
  std::vector<std::string> group_by;
};

struct GroupStats {
  std::string tag;
  std::string value;
  std::size_t count = 0;
  std::size_t correct = 0;
  std::size_t missing = 0;
  double accuracy = 0.0;
};

struct EvalReport {
  std::size_t evaluated = 0;
  std::size_t correct = 0;
  std::size_t missing = 0;
  std::size_t failed = 0;  // backend_error or failed outcomes
  double accuracy = 0.0;
  std::optional<F1Result> f1;
  std::optional<double> judge_accuracy;
  std::size_t judge_unparseable = 0;
  double mean_api_calls = 0.0;
  std::vector<GroupStats> breakdowns;
  std::vector<std::string> notes;
};

// Results are matched to instances by id. Throws Error(IdMismatch) for a
// result whose id is unknown or repeated.
EvalReport build_report(std::span<const RunResult> results, std::span<const Instance> instances,
                        const ReportOptions& options = {});

nlohmann::ordered_json report_to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);

}  // namespace tabreason
