#include "tms/util/log.hpp"

#include "tms/util/error.hpp"

#include <atomic>
#include <cctype>
#include <cstdio>
#include <ctime>
#include <mutex>

#include <sys/time.h>

namespace tms::log {

namespace {

std::atomic<Level> g_level{Level::Info};
std::mutex g_sink_mu;
Sink g_sink;

const char* level_tag(Level level)
{
    switch (level) {
    case Level::Trace: return "trace";
    case Level::Debug: return "debug";
    case Level::Info: return "info";
    case Level::Warn: return "warn";
    case Level::Error: return "error";
    case Level::Off: return "off";
    }
    return "?";
}

void default_sink(Level level, const std::string& message)
{
    timeval tv{};
    gettimeofday(&tv, nullptr);
    tm utc{};
    gmtime_r(&tv.tv_sec, &utc);
    char stamp[64];
    std::snprintf(stamp, sizeof stamp, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                  utc.tm_year + 1900, utc.tm_mon + 1, utc.tm_mday, utc.tm_hour, utc.tm_min,
                  utc.tm_sec, static_cast<int>(tv.tv_usec / 1000));
    std::fprintf(stderr, "%s [%s] %s\n", stamp, level_tag(level), message.c_str());
}

} // namespace

Level level()
{
    return g_level.load(std::memory_order_relaxed);
}

void set_level(Level level)
{
    g_level.store(level, std::memory_order_relaxed);
}

Level parse_level(const std::string& name)
{
    std::string lower;
    lower.reserve(name.size());
    for (char c : name) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (lower == "trace") return Level::Trace;
    if (lower == "debug") return Level::Debug;
    if (lower == "info") return Level::Info;
    if (lower == "warn" || lower == "warning") return Level::Warn;
    if (lower == "error") return Level::Error;
    if (lower == "off") return Level::Off;
    throw ValidationError("log-level", "unknown level '" + name + "'");
}

void set_sink(Sink sink)
{
    std::lock_guard lock(g_sink_mu);
    g_sink = std::move(sink);
}

void write(Level level, const std::string& message)
{
    if (level < g_level.load(std::memory_order_relaxed)) {
        return;
    }
    std::lock_guard lock(g_sink_mu);
    if (g_sink) {
        g_sink(level, message);
    } else {
        default_sink(level, message);
    }
}

} // namespace tms::log
