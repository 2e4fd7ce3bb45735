#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "tabreason/backend.hpp"
#include "tabreason/config.hpp"

namespace tabreason::cli {

// 0 on success, 1 when some items failed, 2 on usage errors. Machine output
// goes to `out`, diagnostics to `err`.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "replay:PATH", "http" (base_url from the settings) or an http(s):// URL.
std::unique_ptr<Backend> make_backend(const std::string& spec, const Settings& settings);

}  // namespace tabreason::cli
