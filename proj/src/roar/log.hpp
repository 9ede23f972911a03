#pragma once

#include <string>

namespace roar {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Verbosity comes from the ROAR_LOG env var (error|warn|info|debug),
// default warn. Everything goes to stderr.
LogLevel log_level();
void log_line(LogLevel level, const std::string& msg);

inline void log_error(const std::string& m) { log_line(LogLevel::Error, m); }
inline void log_warn(const std::string& m) { log_line(LogLevel::Warn, m); }
inline void log_info(const std::string& m) { log_line(LogLevel::Info, m); }
inline void log_debug(const std::string& m) { log_line(LogLevel::Debug, m); }

}  // namespace roar
