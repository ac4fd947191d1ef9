#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace robustnet::log {

enum class Level { off = 0, info = 1, debug = 2 };

namespace detail {
inline Level& level_ref() {
  static Level lvl = [] {
    const char* env = std::getenv("ROBUSTNET_LOG");
    if (env == nullptr) return Level::off;
    if (std::strcmp(env, "debug") == 0) return Level::debug;
    if (std::strcmp(env, "info") == 0) return Level::info;
    return Level::off;
  }();
  return lvl;
}
}  // namespace detail

inline Level level() { return detail::level_ref(); }
inline void set_level(Level lvl) { detail::level_ref() = lvl; }

inline bool info_enabled() { return level() >= Level::info; }
inline bool debug_enabled() { return level() >= Level::debug; }

inline void info(const std::string& line) {
  if (info_enabled()) std::fprintf(stderr, "%s\n", line.c_str());
}

// Debug lines are JSON objects, one per line (LP pivot log, generated cuts).
inline void debug(const std::string& json_line) {
  if (debug_enabled()) std::fprintf(stderr, "%s\n", json_line.c_str());
}

}  // namespace robustnet::log
