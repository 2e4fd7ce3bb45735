#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tabreason/backend.hpp"
#include "tabreason/instance.hpp"

namespace fixtures {

std::filesystem::path path(const std::string& relative);
std::string read(const std::filesystem::path& p);

std::vector<tabreason::Instance> cases();
const tabreason::Instance& find(const std::vector<tabreason::Instance>& all, const std::string& id);
std::string transcript(const std::string& id);

// Replay entries for one transcript: the whole text as the first generation
// and, when it holds a SQL block, the text after that block's claimed result
// as the continuation.
std::vector<tabreason::ScriptEntry> replay_script(const std::string& transcript_text);

// A scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return dir_; }
  std::filesystem::path operator/(const std::string& name) const { return dir_ / name; }

 private:
  std::filesystem::path dir_;
};

}  // namespace fixtures
