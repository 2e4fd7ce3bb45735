#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tabreason/backend.hpp"
#include "tabreason/error.hpp"

namespace tabreason {

namespace {

bool transient(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpBackend::HttpBackend(HttpConfig config) : config_(std::move(config)) {
  if (config_.max_attempts < 1) throw Error(ErrorCode::InvalidArgument, "max_attempts must be at least 1");
  const std::string& url = config_.base_url;
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(ErrorCode::InvalidArgument, "base_url needs a scheme: " + url);
  const std::size_t slash = url.find('/', scheme + 3);
  host_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "" : url.substr(slash);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
}

GenerationResult HttpBackend::do_generate(const GenerationRequest& request) {
  nlohmann::ordered_json body;
  body["model"] = config_.model;
  body["messages"] = nlohmann::json::array();
  for (const auto& m : request.messages) {
    body["messages"].push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_new_tokens;
  if (request.stop) body["stop"] = *request.stop;
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  httplib::Client client(host_);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  client.set_write_timeout(config_.timeout);

  std::string last_error;
  auto backoff = config_.initial_backoff;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    attempts_.fetch_add(1);
    auto res = client.Post(path_ + "/chat/completions", headers, payload, "application/json");
    if (!res) {
      last_error = "connection failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200);
      if (transient(res->status)) continue;
      throw Error(ErrorCode::BackendUnavailable, last_error);
    }
    try {
      const auto j = nlohmann::json::parse(res->body);
      const auto& choice = j.at("choices").at(0);
      GenerationResult out;
      const auto& content = choice.at("message").at("content");
      if (!content.is_null()) out.text = content.get<std::string>();
      const bool cut = choice.contains("finish_reason") && choice["finish_reason"] == "length";
      out.finish_reason = cut ? FinishReason::Length : FinishReason::Stop;
      if (out.text.empty()) out.finish_reason = FinishReason::Error;
      return out;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::BackendUnavailable, std::string("malformed completion: ") + e.what());
    }
  }
  throw Error(ErrorCode::BackendUnavailable,
              "gave up after " + std::to_string(config_.max_attempts) + " attempts; " + last_error);
}

}  // namespace tabreason
