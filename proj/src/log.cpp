#include "parcelfuse/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <string_view>

namespace parcelfuse {

namespace {

LogLevel parse_threshold() {
    const char* env = std::getenv("PARCELFUSE_LOG");
    if (!env) return LogLevel::Warn;
    const std::string_view v(env);
    if (v == "error") return LogLevel::Error;
    if (v == "warn") return LogLevel::Warn;
    if (v == "info") return LogLevel::Info;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
}

const char* level_name(LogLevel level) {
    switch (level) {
        case LogLevel::Error: return "error";
        case LogLevel::Warn: return "warn";
        case LogLevel::Info: return "info";
        case LogLevel::Debug: return "debug";
    }
    return "?";
}

}  // namespace

LogLevel log_threshold() {
    static const LogLevel threshold = parse_threshold();
    return threshold;
}

bool log_enabled(LogLevel level) {
    return static_cast<int>(level) <= static_cast<int>(log_threshold());
}

void log_message(LogLevel level, const std::string& msg) {
    if (!log_enabled(level)) return;
    std::fprintf(stderr, "%s: %s\n", level_name(level), msg.c_str());
}

}  // namespace parcelfuse
