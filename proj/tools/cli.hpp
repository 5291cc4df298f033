#pragma once

#include <string>
#include <vector>

#include "bazykin/bifurcation.hpp"

namespace bazykin::cli {

/// Exit codes: 0 success, 1 domain error (JSON on stderr), 2 usage error.
int run(int argc, const char* const* argv);

/// Convenience overload; `args` excludes the program name.
int run(const std::vector<std::string>& args);

/// Parses the inclusive sweep syntax "lo..hi:n". Throws std::invalid_argument.
[[nodiscard]] GridAxis parse_axis(const std::string& text);

}  // namespace bazykin::cli
