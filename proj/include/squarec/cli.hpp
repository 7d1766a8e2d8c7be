#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace squarec::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_data = 2,
    exit_nonconvergence = 3,
};

/// Variables named SQUAREC_<OPTION> (dashes become underscores, upper case) fill any
/// option the command line leaves unset. SQUAREC_CONFIG names a config file.
using Environment = std::map<std::string, std::string>;

/// SQUAREC_* entries of the process environment.
Environment process_environment();

/// Runs one command. `args` excludes the program name. Precedence for option values:
/// command line, then environment, then config file, then built-in defaults.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Environment& env = {});

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace squarec::cli
