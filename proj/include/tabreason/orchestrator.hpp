#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabreason/backend.hpp"
#include "tabreason/instance.hpp"
#include "tabreason/prompt.hpp"
#include "tabreason/response.hpp"

namespace tabreason {

struct RunConfig {
  int max_new_tokens = 1024;
  double temperature = 0.0;
  // Estimated tokens allowed for the serialized table; 0 disables truncation.
  std::size_t table_token_budget = 0;
  int max_injection_rounds = 4;
  bool include_demo = true;
  bool fallback_on_sql_error = true;
  std::vector<std::string> result_markers = default_result_markers();
};

// Throws Error(InvalidArgument) when a field is out of range.
void validate(const RunConfig& config);

enum class ExecStatus { Ok, SqlError, NoSql };

std::string_view to_string(ExecStatus status);

struct Round {
  std::string generation;
  std::optional<std::string> detected_sql;
  ExecStatus status = ExecStatus::NoSql;
  // The formatted result for Ok, the error message for SqlError.
  std::string detail;
  std::string injected_text;
  bool fallback_used = false;

  friend bool operator==(const Round&, const Round&) = default;
};

enum class Status { Ok, BackendError, Failed };

std::string_view to_string(Status status);

struct Trace {
  std::string instance_id;
  std::string prompt;
  std::vector<Round> rounds;
  std::string final_generation;
  FinalAnswer final_answer;
  int api_calls = 0;
  std::vector<std::string> warnings;

  friend bool operator==(const Trace&, const Trace&) = default;
};

struct Outcome {
  std::string instance_id;
  FinalAnswer final_answer;
  int api_calls = 0;
  Status status = Status::Ok;
  std::string error;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct RunResult {
  Outcome outcome;
  Trace trace;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

// Generate, execute the next unresolved SQL block, splice the real result in
// after its marker, and generate again, until no new block appears or the
// injection cap is hit. Backend failures end the run with
// Status::BackendError rather than throwing.
RunResult run_instance(const Instance& instance, const RunConfig& config, Backend& backend,
                       const PromptTemplates& templates = PromptTemplates::builtin());

// Results come back in input order whatever the parallelism. Throws
// Error(InvalidArgument) for parallelism 0.
std::vector<RunResult> run_batch(std::span<const Instance> instances, const RunConfig& config, Backend& backend,
                                 std::size_t parallelism,
                                 const PromptTemplates& templates = PromptTemplates::builtin());

double mean_api_calls(std::span<const RunResult> results);

// One JSON object per line, fields in a fixed order.
nlohmann::ordered_json result_to_json(const RunResult& result);
RunResult result_from_json(const nlohmann::json& j);
std::string results_to_jsonl(std::span<const RunResult> results);
void write_results(const std::filesystem::path& path, std::span<const RunResult> results);
std::vector<RunResult> load_results(const std::filesystem::path& path);

}  // namespace tabreason
