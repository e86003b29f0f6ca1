#include "evgame/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace evgame::log {

namespace {

Level parse_level(const char* raw)
{
    if (raw == nullptr) return Level::warn;
    const std::string s(raw);
    if (s == "error") return Level::error;
    if (s == "info") return Level::info;
    if (s == "debug") return Level::debug;
    return Level::warn;
}

constexpr const char* kNames[] = {"error", "warn", "info", "debug"};

}  // namespace

Level threshold()
{
    static const Level level = parse_level(std::getenv("EVGAME_LOG"));
    return level;
}

void write(Level level, std::string_view message)
{
    if (static_cast<int>(level) > static_cast<int>(threshold())) return;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::cerr << "[evgame " << kNames[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace evgame::log
