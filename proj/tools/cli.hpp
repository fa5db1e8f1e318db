#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cgmn::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,   // bad flag, unknown config key, invalid value
  kData = 3,     // malformed or inconsistent input data
  kNumeric = 4,  // training diverged
  kIo = 5,       // missing or unwritable file
};

// Runs one `cgmn` invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cgmn::cli
