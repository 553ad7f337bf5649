#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace credo {

enum class LogLevel : int { quiet = 0, info = 1, debug = 2 };

/// Verbosity from the CREDO_LOG environment variable (quiet|info|debug).
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* v = std::getenv("CREDO_LOG");
    if (!v) return LogLevel::info;
    const std::string s(v);
    if (s == "quiet") return LogLevel::quiet;
    if (s == "debug") return LogLevel::debug;
    return LogLevel::info;
  }();
  return level;
}

template <typename... Args>
void log_info(const char* fmt, Args... args) {
  if (log_level() >= LogLevel::info) {
    std::fprintf(stderr, "[info] ");
    std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
  }
}

template <typename... Args>
void log_debug(const char* fmt, Args... args) {
  if (log_level() >= LogLevel::debug) {
    std::fprintf(stderr, "[debug] ");
    std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
  }
}

}  // namespace credo
