#pragma once

#include <iosfwd>

namespace squeeze::cli {

inline constexpr const char *kVersion = "1.0.0";

/// Entry point behind xsqueeze. Returns the process exit code.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace squeeze::cli
