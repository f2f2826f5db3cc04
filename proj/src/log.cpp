#include "binmf/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

namespace binmf::log {

namespace {

Level parse_env() {
    const char* env = std::getenv("BINMF_LOG");
    if (env == nullptr) return Level::warn;
    std::string value(env);
    if (value == "error") return Level::error;
    if (value == "warn") return Level::warn;
    if (value == "info") return Level::info;
    if (value == "debug") return Level::debug;
    return Level::warn;
}

const char* level_name(Level level) {
    switch (level) {
        case Level::error: return "error";
        case Level::warn: return "warn";
        case Level::info: return "info";
        case Level::debug: return "debug";
    }
    return "?";
}

}  // namespace

Level threshold() {
    static const Level value = parse_env();
    return value;
}

bool enabled(Level level) {
    return static_cast<int>(level) <= static_cast<int>(threshold());
}

void write(Level level, std::string_view msg) {
    if (!enabled(level)) return;
    std::fprintf(stderr, "[binmf][%s] %.*s\n", level_name(level), static_cast<int>(msg.size()),
                 msg.data());
}

}  // namespace binmf::log
