#pragma once

#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>

namespace vitalclust::log {

enum class Level { Quiet = 0, Info = 1, Debug = 2 };

// Verbosity comes from the VITALCLUST_LOG environment variable only
// (quiet | info | debug); default info.
inline Level level() {
  static const Level lvl = [] {
    const char* env = std::getenv("VITALCLUST_LOG");
    if (!env) return Level::Info;
    const std::string_view v{env};
    if (v == "quiet") return Level::Quiet;
    if (v == "debug") return Level::Debug;
    return Level::Info;
  }();
  return lvl;
}

inline void info(const std::string& msg) {
  if (level() >= Level::Info) std::cerr << "[vitalclust] " << msg << "\n";
}

inline void debug(const std::string& msg) {
  if (level() >= Level::Debug) std::cerr << "[vitalclust:debug] " << msg << "\n";
}

}  // namespace vitalclust::log
