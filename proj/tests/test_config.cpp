#include "doctest.h"
#include "fixtures.hpp"
#include "tabreason/config.hpp"
#include "tabreason/error.hpp"

#include <fstream>

using namespace tabreason;

TEST_SUITE("config") {

TEST_CASE("defaults follow the inference setup") {
  const Settings s;
  CHECK(s.run.max_new_tokens == 1024);
  CHECK(s.run.temperature == 0.0);
  CHECK(s.run.max_injection_rounds == 4);
  CHECK(s.run.fallback_on_sql_error);
  CHECK(s.run.include_demo);
  CHECK(s.parallelism == 1);
  CHECK(s.http.max_attempts == 3);
}

TEST_CASE("key=value lines with comments") {
  const auto s = parse_settings(
      "# run settings\n"
      "max_new_tokens = 512\n"
      "temperature=0.7  # warmer\n"
      "\n"
      "table_token_budget = 2000\n"
      "include_demo = false\n"
      "fallback_on_sql_error = no\n"
      "parallelism = 8\n"
      "replay_mode = keyed\n"
      "base_url = http://localhost:8000/v1\n"
      "model = local\n"
      "max_attempts = 5\n"
      "backoff_ms = 10\n"
      "timeout_s = 30\n"
      "template_dir = /tmp/t\n");
  CHECK(s.run.max_new_tokens == 512);
  CHECK(s.run.temperature == 0.7);
  CHECK(s.run.table_token_budget == 2000);
  CHECK_FALSE(s.run.include_demo);
  CHECK_FALSE(s.run.fallback_on_sql_error);
  CHECK(s.parallelism == 8);
  CHECK(s.replay_mode == ReplayMode::Keyed);
  CHECK(s.http.base_url == "http://localhost:8000/v1");
  CHECK(s.http.model == "local");
  CHECK(s.http.max_attempts == 5);
  CHECK(s.http.initial_backoff == std::chrono::milliseconds(10));
  CHECK(s.http.timeout == std::chrono::seconds(30));
  CHECK(s.template_dir == std::filesystem::path("/tmp/t"));
}

TEST_CASE("later files override a base") {
  Settings base;
  base.parallelism = 4;
  const auto s = parse_settings("model = m\n", base);
  CHECK(s.parallelism == 4);
  CHECK(s.http.model == "m");
}

TEST_CASE("errors name the line") {
  for (const char* bad : {"max_new_tokens = 0", "temperature = -1", "max_injection_rounds = 0",
                          "include_demo = maybe", "replay_mode = random", "colour = red", "just words",
                          "parallelism = 2x"}) {
    CAPTURE(bad);
    try {
      parse_settings(std::string("\n") + bad);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidArgument);
      CHECK(e.detail().starts_with("line 2: "));
    }
  }
}

TEST_CASE("load from file") {
  fixtures::TempDir dir;
  std::ofstream(dir / "run.conf") << "max_injection_rounds = 2\n";
  CHECK(load_settings(dir / "run.conf").run.max_injection_rounds == 2);
  CHECK_THROWS_AS(load_settings(dir / "missing.conf"), Error);
}

}
