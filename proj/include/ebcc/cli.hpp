#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ebcc {

// Exit codes: 0 success, 1 usage error, 2 data or I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// args excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace ebcc
