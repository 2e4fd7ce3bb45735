#include <charconv>
#include <fstream>
#include <sstream>

#include "tabreason/config.hpp"
#include "tabreason/error.hpp"
#include "tabreason/text.hpp"

namespace tabreason {

namespace {

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view want) {
  throw Error(ErrorCode::InvalidArgument,
              std::string(key) + ": expected " + std::string(want) + ", got '" + std::string(value) + "'");
}

long long as_int(std::string_view key, std::string_view v, long long min) {
  long long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || out < min) {
    bad(key, v, "an integer >= " + std::to_string(min));
  }
  return out;
}

double as_real(std::string_view key, std::string_view v) {
  double out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || !(out >= 0)) bad(key, v, "a non-negative number");
  return out;
}

bool as_bool(std::string_view key, std::string_view v) {
  const std::string l = text::to_lower(v);
  if (l == "true" || l == "yes" || l == "on" || l == "1") return true;
  if (l == "false" || l == "no" || l == "off" || l == "0") return false;
  bad(key, v, "true or false");
}

}  // namespace

void apply_setting(Settings& s, std::string_view key, std::string_view value) {
  const std::string_view v = text::trim(value);
  if (key == "max_new_tokens") s.run.max_new_tokens = static_cast<int>(as_int(key, v, 1));
  else if (key == "temperature") s.run.temperature = as_real(key, v);
  else if (key == "table_token_budget") s.run.table_token_budget = static_cast<std::size_t>(as_int(key, v, 0));
  else if (key == "max_injection_rounds") s.run.max_injection_rounds = static_cast<int>(as_int(key, v, 1));
  else if (key == "include_demo") s.run.include_demo = as_bool(key, v);
  else if (key == "fallback_on_sql_error") s.run.fallback_on_sql_error = as_bool(key, v);
  else if (key == "parallelism") s.parallelism = static_cast<std::size_t>(as_int(key, v, 1));
  else if (key == "replay_mode") {
    if (v == "sequence") s.replay_mode = ReplayMode::Sequence;
    else if (v == "keyed") s.replay_mode = ReplayMode::Keyed;
    else bad(key, v, "sequence or keyed");
  }
  else if (key == "base_url") s.http.base_url = std::string(v);
  else if (key == "model") s.http.model = std::string(v);
  else if (key == "api_key_env") s.http.api_key_env = std::string(v);
  else if (key == "max_attempts") s.http.max_attempts = static_cast<int>(as_int(key, v, 1));
  else if (key == "backoff_ms") s.http.initial_backoff = std::chrono::milliseconds(as_int(key, v, 0));
  else if (key == "timeout_s") s.http.timeout = std::chrono::seconds(as_int(key, v, 1));
  else if (key == "template_dir") s.template_dir = std::filesystem::path(std::string(v));
  else throw Error(ErrorCode::InvalidArgument, "unknown config key '" + std::string(key) + "'");
}

Settings parse_settings(std::string_view source, Settings base) {
  std::size_t lineno = 0;
  for (const auto& line : text::split_lines(source)) {
    ++lineno;
    std::string_view l = text::line_view(source, line);
    if (auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = text::trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(lineno) + ": expected key=value");
    }
    try {
      apply_setting(base, text::trim(l.substr(0, eq)), l.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(lineno) + ": " + e.detail());
    }
  }
  return base;
}

Settings load_settings(const std::filesystem::path& path, Settings base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_settings(ss.str(), std::move(base));
}

}  // namespace tabreason
