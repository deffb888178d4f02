#pragma once

#include <string>

namespace parcelfuse {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Threshold comes from the PARCELFUSE_LOG environment variable
// (error|warn|info|debug), read once per process. Default is warn.
LogLevel log_threshold();

bool log_enabled(LogLevel level);

// Writes "level: msg" to stderr when the level passes the threshold.
void log_message(LogLevel level, const std::string& msg);

inline void log_error(const std::string& msg) { log_message(LogLevel::Error, msg); }
inline void log_warn(const std::string& msg) { log_message(LogLevel::Warn, msg); }
inline void log_info(const std::string& msg) { log_message(LogLevel::Info, msg); }
inline void log_debug(const std::string& msg) { log_message(LogLevel::Debug, msg); }

}  // namespace parcelfuse
