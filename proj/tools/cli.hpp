#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spectratile::cli {

enum ExitCode : int { kAffirmative = 0, kNegative = 1, kUsageError = 2 };

// Runs one command; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace spectratile::cli
