#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "kz/fetch.hpp"

namespace kz {

/// Current UTC calendar year from the system clock.
int system_clock_year();

/// Everything the command line touches outside its arguments, injectable so
/// runs are reproducible under test.
struct CliEnv {
    std::function<int()> current_year = system_clock_year;
    std::ostream* out = nullptr; // data stream (stdout when null)
    std::ostream* err = nullptr; // diagnostics stream (stderr when null)
    std::function<std::string(const char*)> getenv_fn; // "" when unset
    HttpGet http; // transport override for `fetch`; empty uses a real client
};

/// Runs one subcommand. args excludes the program name.
/// Exit status: 0 success, 1 usage error, 2 data error, 3 transport error.
int run(const std::vector<std::string>& args, const CliEnv& env);

} // namespace kz
