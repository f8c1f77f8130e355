#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace purlite::cli {

/// Dispatch one command-line invocation. Returns the process exit code:
/// 0 success, 1 lint/check findings at error severity, 2 usage or I/O error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace purlite::cli
