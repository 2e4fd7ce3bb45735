#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "tabreason/dataset.hpp"
#include "tabreason/error.hpp"
#include "tabreason/evaluation.hpp"
#include "tabreason/sql.hpp"
#include "tabreason/text.hpp"

namespace tabreason {

CandidateSet generate_candidates(std::span<const Instance> instances, Backend& teacher, const RunConfig& config,
                                 std::size_t parallelism, const PromptTemplates& templates) {
  const auto results = run_batch(instances, config, teacher, parallelism, templates);
  CandidateSet out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const RunResult& r = results[i];
    const Instance& inst = instances[i];
    if (r.outcome.status != Status::Ok) {
      out.errors.push_back({inst.id, r.outcome.error});
      continue;
    }
    Candidate c;
    c.instance_id = inst.id;
    c.prompt = build_task_prompt(inst, false, templates);
    c.teacher_response = r.trace.final_generation;
    c.extracted_answer = r.outcome.final_answer;
    c.consistent = is_correct(c.extracted_answer, inst);
    c.error_tags = tag_response_errors(c.teacher_response, inst);
    c.api_calls = r.outcome.api_calls;
    out.candidates.push_back(std::move(c));
  }
  return out;
}

FilterResult consistency_filter(std::span<const Candidate> candidates, std::span<const Instance> instances) {
  std::unordered_map<std::string, const Instance*> by_id;
  for (const auto& inst : instances) by_id.emplace(inst.id, &inst);
  FilterResult out;
  for (const auto& c : candidates) {
    auto it = by_id.find(c.instance_id);
    if (it == by_id.end()) throw Error(ErrorCode::IdMismatch, "candidate for unknown instance '" + c.instance_id + "'");
    Candidate copy = c;
    copy.consistent = is_correct(c.extracted_answer, *it->second);
    if (copy.consistent) {
      out.kept.push_back(std::move(copy));
    } else if (c.extracted_answer.is_missing()) {
      out.dropped.push_back({std::move(copy), "no final answer"});
    } else {
      out.dropped.push_back({std::move(copy), "answer '" + answer_text(c.extracted_answer) + "' disagrees with gold"});
    }
  }
  return out;
}

std::vector<std::vector<std::string>> claimed_rows(std::string_view claimed) {
  std::vector<std::string_view> lines;
  for (const auto& line : text::split_lines(claimed)) {
    std::string_view l = text::trim(text::line_view(claimed, line));
    if (l.empty() || l.starts_with("```")) continue;
    lines.push_back(l);
  }
  std::vector<std::vector<std::string>> rows;
  const bool piped = std::any_of(lines.begin(), lines.end(), [](std::string_view l) {
    return l.find('|') != std::string_view::npos;
  });
  if (piped) {
    std::string joined;
    for (auto l : lines) joined += std::string(l) + "\n";
    try {
      Table t = parse_pipe_table(joined);
      rows.push_back(t.headers);
      for (const auto& r : t.rows) {
        std::vector<std::string> cells;
        for (const auto& c : r) cells.push_back(c.raw());
        rows.push_back(std::move(cells));
      }
    } catch (const Error&) {
    }
    return rows;
  }
  std::vector<std::string> keyed;
  for (auto l : lines) {
    const auto colon = l.find(':');
    if (colon != std::string_view::npos && colon > 0 && colon + 1 < l.size()) {
      keyed.emplace_back(text::trim(l.substr(colon + 1)));
    } else {
      rows.push_back({std::string(l)});
    }
  }
  if (!keyed.empty()) rows.push_back(std::move(keyed));
  return rows;
}

namespace {

using Rows = std::vector<std::vector<std::string>>;

Rows normalized(Rows rows) {
  for (auto& r : rows) {
    for (auto& c : r) c = normalize_answer(c);
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

bool claim_agrees(std::string_view claimed, const sql::ResultTable& actual) {
  Rows claim = claimed_rows(claimed);
  Rows real;
  for (const auto& r : actual.rows) {
    std::vector<std::string> cells;
    for (const auto& c : r) cells.push_back(c.raw());
    real.push_back(std::move(cells));
  }
  const Rows want = normalized(real);
  if (normalized(claim) == want) return true;
  // The claim usually repeats the header line first.
  if (!claim.empty() && normalized(Rows(claim.begin() + 1, claim.end())) == want) return true;
  return false;
}

}  // namespace

std::set<std::string> tag_response_errors(std::string_view response, const Instance& instance) {
  std::set<std::string> tags;
  for (const auto& block : segment_response(response).sql_blocks) {
    sql::ResultTable actual;
    try {
      actual = sql::run(block.sql_text, instance.table);
    } catch (const Error&) {
      tags.emplace(kSqlErrorTag);
      continue;
    }
    if (block.claimed_result && !text::trim(*block.claimed_result).empty() &&
        !claim_agrees(*block.claimed_result, actual)) {
      tags.emplace(kExecutionMismatchTag);
    }
  }
  return tags;
}

SegmentSelection segment_selection_from_string(std::string_view name) {
  if (name == "full") return SegmentSelection::Full;
  if (name == "no-plan" || name == "reasoning-only") return SegmentSelection::NoPlan;
  if (name == "no-reasoning") return SegmentSelection::NoReasoning;
  throw Error(ErrorCode::InvalidArgument, "unknown segment selection '" + std::string(name) + "'");
}

std::string_view to_string(SegmentSelection selection) {
  switch (selection) {
    case SegmentSelection::Full: return "full";
    case SegmentSelection::NoPlan: return "no-plan";
    case SegmentSelection::NoReasoning: return "no-reasoning";
  }
  return "full";
}

std::string select_segments(std::string_view response, SegmentSelection selection) {
  if (selection == SegmentSelection::Full) return std::string(response);
  const auto sections = split_sections(response);
  const int drop = selection == SegmentSelection::NoPlan ? 1 : 3;
  std::string out;
  for (const auto& s : sections) {
    if (s.number != drop) {
      out += s.text;
      continue;
    }
    if (selection == SegmentSelection::NoReasoning) {
      // The conclusion lives at the end of the reasoning; keep it.
      std::string_view last;
      for (const auto& line : text::split_lines(s.text)) {
        std::string_view l = text::trim(text::line_view(s.text, line));
        if (!l.empty()) last = l;
      }
      if (text::to_lower(last).find("answer is") != std::string::npos) out += std::string(last) + "\n";
    }
  }
  return out;
}

std::string export_to_string(std::span<const Candidate> kept, SegmentSelection selection) {
  if (kept.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to export");
  std::string out;
  for (const auto& c : kept) {
    nlohmann::ordered_json j;
    j["id"] = c.instance_id;
    j["prompt"] = c.prompt;
    j["response"] = select_segments(c.teacher_response, selection);
    j["tags"] = std::vector<std::string>(c.error_tags.begin(), c.error_tags.end());
    out += j.dump() + "\n";
  }
  return out;
}

void export_jsonl(const std::filesystem::path& path, std::span<const Candidate> kept, SegmentSelection selection) {
  const std::string body = export_to_string(kept, selection);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  out << body;
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

std::vector<Instance> sample_instances(std::span<const Instance> instances, std::size_t count, std::uint64_t seed) {
  std::vector<Instance> out;
  std::mt19937_64 rng(seed);
  std::sample(instances.begin(), instances.end(), std::back_inserter(out), count, rng);
  return out;
}

}  // namespace tabreason
