#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tabreason {

enum class Role { System, User, Assistant };

std::string_view to_string(Role role);

struct Message {
  Role role = Role::User;
  std::string content;

  friend bool operator==(const Message&, const Message&) = default;
};

struct GenerationRequest {
  std::vector<Message> messages;
  int max_new_tokens = 1024;
  double temperature = 0.0;
  std::optional<std::vector<std::string>> stop;
  // "<instance id>#<call index>", used by keyed replay when the prompt hash
  // is not in the script.
  std::string context_key;
};

enum class FinishReason { Stop, Length, Error };

std::string_view to_string(FinishReason reason);
FinishReason finish_reason_from_string(std::string_view name);

struct GenerationResult {
  std::string text;
  FinishReason finish_reason = FinishReason::Stop;

  friend bool operator==(const GenerationResult&, const GenerationResult&) = default;
};

// Throws Error(InvalidArgument) for max_new_tokens <= 0, a negative
// temperature or an empty message list.
void validate(const GenerationRequest& request);

class Backend {
 public:
  virtual ~Backend() = default;

  // Validates, delegates, and counts one call per returned result. Failed
  // attempts are never counted.
  GenerationResult generate(const GenerationRequest& request);

  std::size_t calls() const noexcept { return calls_.load(); }

 protected:
  virtual GenerationResult do_generate(const GenerationRequest& request) = 0;

 private:
  std::atomic<std::size_t> calls_{0};
};

// Whitespace-collapsed role/content pairs hashed with 64-bit FNV-1a, as 16
// hex digits.
std::string prompt_key(const std::vector<Message>& messages);

struct ScriptEntry {
  std::optional<std::string> key;
  GenerationResult result;

  friend bool operator==(const ScriptEntry&, const ScriptEntry&) = default;
};

// JSONL, one {"key"?, "response", "finish_reason"} object per line.
// Throws Error(IoFailure | ParseFailure).
std::vector<ScriptEntry> load_script(const std::filesystem::path& path);
void write_script(const std::filesystem::path& path, const std::vector<ScriptEntry>& entries);
std::string script_to_string(const std::vector<ScriptEntry>& entries);

enum class ReplayMode { Sequence, Keyed };

// Sequence mode hands out entries in file order. Keyed mode looks up the
// prompt hash first and the request's context_key second; entries under one
// key are consumed in order.
class ReplayBackend : public Backend {
 public:
  ReplayBackend(std::vector<ScriptEntry> script, ReplayMode mode);

  static std::unique_ptr<ReplayBackend> from_file(const std::filesystem::path& path, ReplayMode mode);

  std::size_t remaining() const;

 protected:
  GenerationResult do_generate(const GenerationRequest& request) override;

 private:
  ReplayMode mode_;
  mutable std::mutex mu_;
  std::deque<ScriptEntry> sequence_;
  std::map<std::string, std::deque<GenerationResult>> keyed_;
};

// Forwards to another backend and keeps every completed exchange, keyed by
// prompt hash, so that the session can be written out as a replay script.
class RecordingBackend : public Backend {
 public:
  explicit RecordingBackend(Backend& inner) : inner_(inner) {}

  std::vector<ScriptEntry> entries() const;

 protected:
  GenerationResult do_generate(const GenerationRequest& request) override;

 private:
  Backend& inner_;
  mutable std::mutex mu_;
  std::vector<ScriptEntry> entries_;
};

// Throws Error(InvalidArgument) for an empty session, Error(IoFailure) when
// the file cannot be written.
void record_session(const std::filesystem::path& path, const std::vector<ScriptEntry>& entries);

struct HttpConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4o";
  std::string api_key_env = "OPENAI_API_KEY";
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::seconds timeout{120};
};

// OpenAI-compatible chat completions. Connection failures, 429 and 5xx are
// retried with doubling backoff; other statuses fail at once. Throws
// Error(BackendUnavailable).
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpConfig config);

  std::size_t attempts() const noexcept { return attempts_.load(); }

 protected:
  GenerationResult do_generate(const GenerationRequest& request) override;

 private:
  HttpConfig config_;
  std::string host_;  // scheme://host[:port]
  std::string path_;  // base path, without trailing slash
  std::atomic<std::size_t> attempts_{0};
};

}  // namespace tabreason
