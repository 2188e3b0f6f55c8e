#pragma once

#include <iostream>
#include <string_view>

namespace ydecay::log {

enum class Level { quiet = 0, info = 1, debug = 2 };

/// Read from YDECAY_LOG (quiet, info, debug); unset or unknown means info.
Level level();

/// Parses a level name; throws std::invalid_argument on anything else.
Level parse_level(std::string_view s);

template <class... Args>
void info(const Args&... args) {
  if (level() >= Level::info) ((std::clog << "[info] ") << ... << args) << '\n';
}

template <class... Args>
void debug(const Args&... args) {
  if (level() >= Level::debug) ((std::clog << "[debug] ") << ... << args) << '\n';
}

}  // namespace ydecay::log
