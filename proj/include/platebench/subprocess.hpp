#pragma once

#include <chrono>
#include <optional>
#include <string>

namespace platebench {

struct CommandResult {
    int exit_code = -1;
    bool timed_out = false;
    std::string output; // captured standard output
};

/// Replaces every occurrence of `token` in `text` with `value`.
std::string substitute_token(std::string text, const std::string& token,
                             const std::string& value);

/// Runs `command` through /bin/sh -c, capturing standard output. Standard
/// error is inherited so backend diagnostics reach the harness log. When a
/// timeout is given and expires, the whole process group is killed and the
/// result has timed_out = true.
CommandResult run_command(const std::string& command,
                          std::optional<std::chrono::duration<double>> timeout = std::nullopt);

} // namespace platebench
