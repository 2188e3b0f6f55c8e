#include "ydecay/log.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ydecay::log {

Level parse_level(std::string_view s) {
  if (s == "quiet") return Level::quiet;
  if (s == "info") return Level::info;
  if (s == "debug") return Level::debug;
  throw std::invalid_argument("YDECAY_LOG must be quiet, info or debug, got '" + std::string(s) +
                              "'");
}

Level level() {
  static const Level lv = [] {
    const char* env = std::getenv("YDECAY_LOG");
    if (!env || !*env) return Level::info;
    try {
      return parse_level(env);
    } catch (const std::invalid_argument& e) {
      std::clog << "[warn] " << e.what() << "; using info\n";
      return Level::info;
    }
  }();
  return lv;
}

}  // namespace ydecay::log
