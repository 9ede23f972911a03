#include "roar/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace roar {

static LogLevel parse_level() {
  const char* env = std::getenv("ROAR_LOG");
  if (!env) return LogLevel::Warn;
  if (!std::strcmp(env, "error")) return LogLevel::Error;
  if (!std::strcmp(env, "warn")) return LogLevel::Warn;
  if (!std::strcmp(env, "info")) return LogLevel::Info;
  if (!std::strcmp(env, "debug")) return LogLevel::Debug;
  return LogLevel::Warn;
}

LogLevel log_level() {
  static const LogLevel level = parse_level();
  return level;
}

void log_line(LogLevel level, const std::string& msg) {
  if (level > log_level()) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::fprintf(stderr, "roar [%s] %s\n", names[static_cast<int>(level)],
               msg.c_str());
}

}  // namespace roar
