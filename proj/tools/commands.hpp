#pragma once

// Command-line front end, kept in a library so tests can drive it in
// process. `run` never throws: failures map to the exit codes below.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace umbra::cli {

enum Exit : int { kOk = 0, kViolation = 1, kInvalidInput = 2, kNotDelta = 3 };

struct RunConfig {
    std::uint32_t q = 2;  // field order
    std::optional<std::uint32_t> nu;
    std::string preset = "carlitz";
    std::optional<std::string> sigma_file;
    std::size_t n = 4;
    std::size_t terms = 4;
    std::uint64_t seed = 1;
    std::size_t samples = 50;
    std::string format = "json";
    std::optional<std::string> out;
    bool perturb = false;
};

/// Parses argv and runs one command. Output goes to `out` unless --out names
/// a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace umbra::cli
