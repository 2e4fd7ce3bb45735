#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "tabreason/response.hpp"

namespace fixtures {

std::filesystem::path path(const std::string& relative) {
  return std::filesystem::path(TABREASON_FIXTURE_DIR) / relative;
}

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<tabreason::Instance> cases() { return tabreason::load_instances(path("cases.jsonl")); }

const tabreason::Instance& find(const std::vector<tabreason::Instance>& all, const std::string& id) {
  for (const auto& i : all) {
    if (i.id == id) return i;
  }
  throw std::runtime_error("no fixture instance " + id);
}

std::string transcript(const std::string& id) { return read(path("transcripts/" + id + ".txt")); }

std::vector<tabreason::ScriptEntry> replay_script(const std::string& text) {
  std::vector<tabreason::ScriptEntry> out;
  out.push_back({std::nullopt, {text, tabreason::FinishReason::Stop}});
  const auto seg = tabreason::segment_response(text);
  if (!seg.sql_blocks.empty()) {
    out.push_back({std::nullopt, {text.substr(seg.sql_blocks[0].end), tabreason::FinishReason::Stop}});
  }
  return out;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  dir_ = std::filesystem::temp_directory_path() /
         ("tabreason-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(dir_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(dir_, ec);
}

}  // namespace fixtures
