#pragma once

#include <string_view>

// Minimal stderr logger. Verbosity is read once from the BINMF_LOG
// environment variable: error, warn (default), info, debug.
namespace binmf::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

Level threshold();
bool enabled(Level level);
void write(Level level, std::string_view msg);

inline void error(std::string_view msg) { write(Level::error, msg); }
inline void warn(std::string_view msg) { write(Level::warn, msg); }
inline void info(std::string_view msg) { write(Level::info, msg); }
inline void debug(std::string_view msg) { write(Level::debug, msg); }

}  // namespace binmf::log
