#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace superlat::cli {

enum ExitCode : int {
  kSuccess = 0,
  kNegative = 1,  // certified negative or inconclusive
  kParse = 2,
  kInvariant = 3,
  kUnsupported = 4,
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace superlat::cli
