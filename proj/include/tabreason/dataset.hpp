#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabreason/backend.hpp"
#include "tabreason/instance.hpp"
#include "tabreason/orchestrator.hpp"
#include "tabreason/response.hpp"

namespace tabreason {

inline constexpr std::string_view kSqlErrorTag = "sql_error";
inline constexpr std::string_view kExecutionMismatchTag = "execution_mismatch";

struct Candidate {
  std::string instance_id;
  // The task prompt without a demonstration, as a student model would see it.
  std::string prompt;
  std::string teacher_response;
  FinalAnswer extracted_answer;
  bool consistent = false;
  std::set<std::string> error_tags;
  int api_calls = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct CandidateError {
  std::string instance_id;
  std::string message;

  friend bool operator==(const CandidateError&, const CandidateError&) = default;
};

struct CandidateSet {
  std::vector<Candidate> candidates;
  std::vector<CandidateError> errors;
};

// Runs the full pipeline per instance (SQL is executed and injected while the
// teacher generates). Instances whose run fails become error records.
CandidateSet generate_candidates(std::span<const Instance> instances, Backend& teacher, const RunConfig& config,
                                 std::size_t parallelism = 1,
                                 const PromptTemplates& templates = PromptTemplates::builtin());

struct Dropped {
  Candidate candidate;
  std::string reason;
};

struct FilterResult {
  std::vector<Candidate> kept;
  std::vector<Dropped> dropped;
};

// Keeps candidates whose answer is correct under the evaluator. Throws
// Error(IdMismatch) when a candidate has no instance.
FilterResult consistency_filter(std::span<const Candidate> candidates, std::span<const Instance> instances);

// sql_error: some block fails to parse or execute. execution_mismatch: some
// block's claimed result, read as rows of cells, differs from the real one.
std::set<std::string> tag_response_errors(std::string_view response, const Instance& instance);

// Rows of a claimed result: fence lines dropped, pipe lines split into
// cells, "Key: value" lines folded into one row of values, other lines one
// cell each.
std::vector<std::vector<std::string>> claimed_rows(std::string_view claimed);

enum class SegmentSelection { Full, NoPlan, NoReasoning };

// "full", "no-plan" (or "reasoning-only"), "no-reasoning". Throws
// Error(InvalidArgument).
SegmentSelection segment_selection_from_string(std::string_view name);
std::string_view to_string(SegmentSelection selection);

// Drops section 1 (plan) or section 3 (reasoning, keeping the concluding
// answer line). Responses without numbered sections come back unchanged.
std::string select_segments(std::string_view response, SegmentSelection selection);

// {"id", "prompt", "response", "tags"} per line. Throws Error(InvalidArgument)
// for an empty list and Error(IoFailure) on write errors.
std::string export_to_string(std::span<const Candidate> kept, SegmentSelection selection);
void export_jsonl(const std::filesystem::path& path, std::span<const Candidate> kept, SegmentSelection selection);

// Uniform sample without replacement, original order preserved.
std::vector<Instance> sample_instances(std::span<const Instance> instances, std::size_t count, std::uint64_t seed);

}  // namespace tabreason
