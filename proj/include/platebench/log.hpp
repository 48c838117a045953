#pragma once

#include <string>

namespace platebench {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

/// Current verbosity, initialized once from PLATEBENCH_LOG
/// (error|info|debug, default info).
LogLevel log_level();

void log_error(const std::string& message);
void log_info(const std::string& message);
void log_debug(const std::string& message);

} // namespace platebench
