#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trollscope::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

inline constexpr const char* kVersion = "0.1.0";

// args excludes the program name. Reports and summaries go to `out`,
// diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace trollscope::cli
