#include <atomic>
#include <thread>

#include "tabreason/error.hpp"
#include "tabreason/orchestrator.hpp"
#include "tabreason/sql.hpp"

namespace tabreason {

void validate(const RunConfig& config) {
  if (config.max_new_tokens <= 0) throw Error(ErrorCode::InvalidArgument, "max_new_tokens must be positive");
  if (!(config.temperature >= 0.0)) throw Error(ErrorCode::InvalidArgument, "temperature must be >= 0");
  if (config.max_injection_rounds < 1) throw Error(ErrorCode::InvalidArgument, "max_injection_rounds must be >= 1");
  if (config.result_markers.empty()) throw Error(ErrorCode::InvalidArgument, "at least one result marker is needed");
}

std::string_view to_string(ExecStatus status) {
  switch (status) {
    case ExecStatus::Ok: return "ok";
    case ExecStatus::SqlError: return "sql_error";
    case ExecStatus::NoSql: return "no_sql";
  }
  return "no_sql";
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Ok: return "ok";
    case Status::BackendError: return "backend_error";
    case Status::Failed: return "failed";
  }
  return "failed";
}

namespace {

Table fit_table(const Table& table, std::size_t budget, std::vector<std::string>& warnings) {
  if (budget == 0) return table;
  try {
    return truncate_to_budget(table, budget);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BudgetTooSmall) throw;
    Table header_only = table;
    header_only.rows.clear();
    warnings.push_back("table header alone exceeds the token budget; all rows dropped");
    return header_only;
  }
}

}  // namespace

RunResult run_instance(const Instance& instance, const RunConfig& config, Backend& backend,
                       const PromptTemplates& templates) {
  validate(config);
  RunResult out;
  Trace& trace = out.trace;
  Outcome& outcome = out.outcome;
  trace.instance_id = outcome.instance_id = instance.id;

  Instance fitted = instance;
  fitted.table = fit_table(instance.table, config.table_token_budget, trace.warnings);
  for (const auto& w : fitted.table.warnings) trace.warnings.push_back(w);
  trace.prompt = build_task_prompt(fitted, config.include_demo, templates);

  std::string partial;
  std::size_t resolved = 0;
  int injections = 0;
  try {
    for (;;) {
      GenerationRequest req;
      req.messages = {{Role::User, trace.prompt + partial}};
      req.max_new_tokens = config.max_new_tokens;
      req.temperature = config.temperature;
      req.context_key = instance.id + "#" + std::to_string(trace.rounds.size());
      GenerationResult gen = backend.generate(req);

      Round round;
      round.generation = gen.text;
      const std::string full = partial + gen.text;
      const ResponseSegments seg = segment_response(full, config.result_markers);
      if (seg.sql_blocks.size() <= resolved || injections >= config.max_injection_rounds) {
        trace.rounds.push_back(std::move(round));
        trace.final_generation = full;
        break;
      }

      const SqlBlock& block = seg.sql_blocks[resolved];
      round.detected_sql = block.sql_text;
      try {
        round.injected_text = sql::format_result(sql::run(block.sql_text, fitted.table));
        round.status = ExecStatus::Ok;
        round.detail = round.injected_text;
      } catch (const Error& e) {
        round.status = ExecStatus::SqlError;
        round.detail = e.what();
        if (config.fallback_on_sql_error) {
          round.injected_text = block.claimed_result.value_or("");
          round.fallback_used = true;
        }
      }
      partial = resume_prefix(full, resolved, config.result_markers) + round.injected_text;
      ++resolved;
      ++injections;
      trace.rounds.push_back(std::move(round));
    }
    outcome.status = Status::Ok;
  } catch (const Error& e) {
    outcome.status = Status::BackendError;
    outcome.error = e.what();
    trace.final_generation = partial;
  }

  trace.api_calls = static_cast<int>(trace.rounds.size());
  outcome.api_calls = trace.api_calls;
  if (outcome.status == Status::Ok) {
    trace.final_answer = extract_final_answer(trace.final_generation, instance.task, instance.label_set());
  }
  outcome.final_answer = trace.final_answer;
  return out;
}

std::vector<RunResult> run_batch(std::span<const Instance> instances, const RunConfig& config, Backend& backend,
                                 std::size_t parallelism, const PromptTemplates& templates) {
  if (parallelism == 0) throw Error(ErrorCode::InvalidArgument, "parallelism must be at least 1");
  validate(config);
  const std::size_t workers = std::min(parallelism, std::max<std::size_t>(instances.size(), 1));
  std::atomic<std::size_t> next{0};
  std::vector<std::vector<std::pair<std::size_t, RunResult>>> buffers(workers);

  auto work = [&](std::size_t w) {
    for (std::size_t i; (i = next.fetch_add(1)) < instances.size();) {
      const Instance& inst = instances[i];
      try {
        buffers[w].emplace_back(i, run_instance(inst, config, backend, templates));
      } catch (const std::exception& e) {
        RunResult failed;
        failed.trace.instance_id = failed.outcome.instance_id = inst.id;
        failed.outcome.status = Status::Failed;
        failed.outcome.error = e.what();
        buffers[w].emplace_back(i, std::move(failed));
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
  }

  std::vector<RunResult> results(instances.size());
  for (auto& buf : buffers) {
    for (auto& [i, r] : buf) results[i] = std::move(r);
  }
  return results;
}

double mean_api_calls(std::span<const RunResult> results) {
  if (results.empty()) return 0.0;
  double total = 0;
  for (const auto& r : results) total += r.outcome.api_calls;
  return total / static_cast<double>(results.size());
}

}  // namespace tabreason
