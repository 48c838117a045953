#include "platebench/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace platebench {

static LogLevel parse_level() {
    const char* env = std::getenv("PLATEBENCH_LOG");
    if (env == nullptr) return LogLevel::Info;
    if (std::strcmp(env, "error") == 0) return LogLevel::Error;
    if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
    return LogLevel::Info;
}

LogLevel log_level() {
    static const LogLevel level = parse_level();
    return level;
}

static void emit(const char* tag, const std::string& message) {
    std::fprintf(stderr, "[platebench %s] %s\n", tag, message.c_str());
}

void log_error(const std::string& message) {
    emit("error", message);
}

void log_info(const std::string& message) {
    if (log_level() >= LogLevel::Info) emit("info", message);
}

void log_debug(const std::string& message) {
    if (log_level() >= LogLevel::Debug) emit("debug", message);
}

} // namespace platebench
