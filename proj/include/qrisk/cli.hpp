#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qrisk::cli {

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,  // invalid documents, unknown references, empty portfolio
  kUsageOrIo = 2,          // bad flags, unreadable or malformed files
  kTreatmentRequired = 3,  // assess: at least one chain at or above the threshold
};

/// Runs the command line in-process. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qrisk::cli
