#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace subcollect::cli {

enum ExitStatus : int {
    kSuccess = 0,
    kValidationError = 1,
    kIoError = 2,
    kEmptyResult = 3,
};

/// Entry point shared by the binary and the tests. `args` excludes the
/// program name. Payload goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace subcollect::cli
