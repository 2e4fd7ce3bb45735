#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "tabreason/backend.hpp"
#include "tabreason/orchestrator.hpp"

namespace tabreason {

// Everything a key=value config file can set. Unknown keys are errors.
struct Settings {
  RunConfig run;
  std::size_t parallelism = 1;
  ReplayMode replay_mode = ReplayMode::Sequence;
  HttpConfig http;
  std::optional<std::filesystem::path> template_dir;
};

// Throws Error(InvalidArgument) naming the key and the bad value.
void apply_setting(Settings& settings, std::string_view key, std::string_view value);

// '#' starts a comment; blank lines are skipped. Errors carry the line number.
Settings parse_settings(std::string_view text, Settings base = {});
Settings load_settings(const std::filesystem::path& path, Settings base = {});

}  // namespace tabreason
