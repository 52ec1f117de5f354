#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace xpair {

// Stable process exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_validation = 2;
inline constexpr int exit_numerical = 3;
inline constexpr int exit_io = 4;

struct CommandOptions {
    std::string scenario_path;
    std::optional<std::string> out_path;  //!< stdout when empty
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;
    unsigned threads = 0;  //!< 0 picks default_thread_count()
};

/*!
 * Runs `grid`, `rates`, `sample` or `report`. Errors are reported on `err`
 * and mapped to the exit codes above.
 */
int run_command(const std::string& command, const CommandOptions& opts, std::ostream& out, std::ostream& err);

} // namespace xpair
