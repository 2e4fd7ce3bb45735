#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tabreason/backend.hpp"
#include "tabreason/error.hpp"
#include "tabreason/text.hpp"

namespace tabreason {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

std::string_view to_string(FinishReason reason) {
  switch (reason) {
    case FinishReason::Stop: return "stop";
    case FinishReason::Length: return "length";
    case FinishReason::Error: return "error";
  }
  return "stop";
}

FinishReason finish_reason_from_string(std::string_view name) {
  if (name == "stop") return FinishReason::Stop;
  if (name == "length") return FinishReason::Length;
  if (name == "error") return FinishReason::Error;
  throw Error(ErrorCode::ParseFailure, "unknown finish_reason '" + std::string(name) + "'");
}

void validate(const GenerationRequest& request) {
  if (request.messages.empty()) throw Error(ErrorCode::InvalidArgument, "request has no messages");
  if (request.max_new_tokens <= 0) throw Error(ErrorCode::InvalidArgument, "max_new_tokens must be positive");
  if (!(request.temperature >= 0.0)) throw Error(ErrorCode::InvalidArgument, "temperature must be >= 0");
}

GenerationResult Backend::generate(const GenerationRequest& request) {
  validate(request);
  GenerationResult result = do_generate(request);
  calls_.fetch_add(1);
  return result;
}

std::string prompt_key(const std::vector<Message>& messages) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& m : messages) {
    feed(to_string(m.role));
    feed("\x1f");
    feed(text::collapse_whitespace(m.content));
    feed("\x1e");
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

ScriptEntry entry_from_json(const nlohmann::json& j) {
  ScriptEntry e;
  if (j.contains("key") && !j.at("key").is_null()) e.key = j.at("key").get<std::string>();
  e.result.text = j.at("response").get<std::string>();
  e.result.finish_reason = j.contains("finish_reason")
                               ? finish_reason_from_string(j.at("finish_reason").get<std::string>())
                               : FinishReason::Stop;
  return e;
}

}  // namespace

std::vector<ScriptEntry> load_script(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open replay script " + path.string());
  std::vector<ScriptEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      entries.push_back(entry_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseFailure, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return entries;
}

std::string script_to_string(const std::vector<ScriptEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    nlohmann::ordered_json j;
    if (e.key) j["key"] = *e.key;
    j["response"] = e.result.text;
    j["finish_reason"] = to_string(e.result.finish_reason);
    out += j.dump() + "\n";
  }
  return out;
}

void write_script(const std::filesystem::path& path, const std::vector<ScriptEntry>& entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write replay script " + path.string());
  out << script_to_string(entries);
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

void record_session(const std::filesystem::path& path, const std::vector<ScriptEntry>& entries) {
  if (entries.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to record: the session made no calls");
  write_script(path, entries);
}

}  // namespace tabreason
