#include <fstream>

#include "tabreason/error.hpp"
#include "tabreason/orchestrator.hpp"
#include "tabreason/text.hpp"

namespace tabreason {

namespace {

ExecStatus exec_status_from(std::string_view s) {
  if (s == "ok") return ExecStatus::Ok;
  if (s == "sql_error") return ExecStatus::SqlError;
  if (s == "no_sql") return ExecStatus::NoSql;
  throw Error(ErrorCode::ParseFailure, "unknown execution status '" + std::string(s) + "'");
}

Status status_from(std::string_view s) {
  if (s == "ok") return Status::Ok;
  if (s == "backend_error") return Status::BackendError;
  if (s == "failed") return Status::Failed;
  throw Error(ErrorCode::ParseFailure, "unknown status '" + std::string(s) + "'");
}

}  // namespace

nlohmann::ordered_json result_to_json(const RunResult& result) {
  const Trace& t = result.trace;
  nlohmann::ordered_json j;
  j["instance_id"] = t.instance_id;
  j["status"] = to_string(result.outcome.status);
  if (!result.outcome.error.empty()) j["error"] = result.outcome.error;
  j["api_calls"] = t.api_calls;
  j["final_answer"] = final_answer_to_json(t.final_answer);
  j["prompt"] = t.prompt;
  auto rounds = nlohmann::ordered_json::array();
  for (const auto& r : t.rounds) {
    nlohmann::ordered_json jr;
    jr["generation"] = r.generation;
    jr["detected_sql"] = r.detected_sql ? nlohmann::ordered_json(*r.detected_sql) : nlohmann::ordered_json();
    jr["execution"] = to_string(r.status);
    jr["detail"] = r.detail;
    jr["injected_text"] = r.injected_text;
    jr["fallback_used"] = r.fallback_used;
    rounds.push_back(std::move(jr));
  }
  j["rounds"] = std::move(rounds);
  j["final_generation"] = t.final_generation;
  j["warnings"] = t.warnings;
  return j;
}

RunResult result_from_json(const nlohmann::json& j) {
  try {
    RunResult r;
    Trace& t = r.trace;
    t.instance_id = r.outcome.instance_id = j.at("instance_id").get<std::string>();
    r.outcome.status = status_from(j.at("status").get<std::string>());
    r.outcome.error = j.value("error", "");
    t.api_calls = r.outcome.api_calls = j.at("api_calls").get<int>();
    t.final_answer = r.outcome.final_answer = final_answer_from_json(j.at("final_answer"));
    t.prompt = j.at("prompt").get<std::string>();
    for (const auto& jr : j.at("rounds")) {
      Round round;
      round.generation = jr.at("generation").get<std::string>();
      if (!jr.at("detected_sql").is_null()) round.detected_sql = jr.at("detected_sql").get<std::string>();
      round.status = exec_status_from(jr.at("execution").get<std::string>());
      round.detail = jr.at("detail").get<std::string>();
      round.injected_text = jr.at("injected_text").get<std::string>();
      round.fallback_used = jr.at("fallback_used").get<bool>();
      t.rounds.push_back(std::move(round));
    }
    t.final_generation = j.at("final_generation").get<std::string>();
    t.warnings = j.value("warnings", std::vector<std::string>{});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseFailure, std::string("trace: ") + e.what());
  }
}

std::string results_to_jsonl(std::span<const RunResult> results) {
  std::string out;
  for (const auto& r : results) out += result_to_json(r).dump() + "\n";
  return out;
}

void write_results(const std::filesystem::path& path, std::span<const RunResult> results) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << results_to_jsonl(results);
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::vector<RunResult> load_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::vector<RunResult> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseFailure, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(result_from_json(j));
  }
  return out;
}

}  // namespace tabreason
