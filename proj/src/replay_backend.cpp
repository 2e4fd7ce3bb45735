#include "tabreason/backend.hpp"
#include "tabreason/error.hpp"

namespace tabreason {

ReplayBackend::ReplayBackend(std::vector<ScriptEntry> script, ReplayMode mode) : mode_(mode) {
  for (auto& e : script) {
    if (mode_ == ReplayMode::Keyed) {
      if (!e.key) throw Error(ErrorCode::ParseFailure, "keyed replay needs a key on every entry");
      keyed_[*e.key].push_back(std::move(e.result));
    } else {
      sequence_.push_back(std::move(e));
    }
  }
}

std::unique_ptr<ReplayBackend> ReplayBackend::from_file(const std::filesystem::path& path, ReplayMode mode) {
  return std::make_unique<ReplayBackend>(load_script(path), mode);
}

std::size_t ReplayBackend::remaining() const {
  std::lock_guard lock(mu_);
  std::size_t n = sequence_.size();
  for (const auto& [key, q] : keyed_) n += q.size();
  return n;
}

GenerationResult ReplayBackend::do_generate(const GenerationRequest& request) {
  std::lock_guard lock(mu_);
  if (mode_ == ReplayMode::Sequence) {
    if (sequence_.empty()) throw Error(ErrorCode::ScriptExhausted, "replay script has no responses left");
    GenerationResult r = std::move(sequence_.front().result);
    sequence_.pop_front();
    return r;
  }
  bool drained = false;
  for (const std::string& key : {prompt_key(request.messages), request.context_key}) {
    auto it = keyed_.find(key);
    if (it == keyed_.end()) continue;
    if (it->second.empty()) {
      drained = true;
      continue;
    }
    GenerationResult r = std::move(it->second.front());
    it->second.pop_front();
    return r;
  }
  if (drained) throw Error(ErrorCode::ScriptExhausted, "no responses left for this prompt");
  throw Error(ErrorCode::ScriptMismatch, "no scripted response for prompt " + prompt_key(request.messages) +
                                             (request.context_key.empty() ? "" : " or " + request.context_key));
}

std::vector<ScriptEntry> RecordingBackend::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

GenerationResult RecordingBackend::do_generate(const GenerationRequest& request) {
  GenerationResult r = inner_.generate(request);
  std::lock_guard lock(mu_);
  entries_.push_back({prompt_key(request.messages), r});
  return r;
}

}  // namespace tabreason
