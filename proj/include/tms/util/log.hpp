#pragma once

#include <functional>
#include <sstream>
#include <string>

namespace tms::log {

enum class Level { Trace, Debug, Info, Warn, Error, Off };

Level level();
void set_level(Level level);

/// Parses "trace", "debug", "info", "warn", "error" or "off" (case-insensitive).
Level parse_level(const std::string& name);

/// Replaces the output sink. An empty function restores the default
/// (timestamped lines on stderr). Intended for tests and embedding.
using Sink = std::function<void(Level, const std::string&)>;
void set_sink(Sink sink);

void write(Level level, const std::string& message);

namespace detail {

template <typename... Args>
std::string concat(const Args&... args)
{
    std::ostringstream os;
    (os << ... << args);
    return os.str();
}

} // namespace detail

template <typename... Args>
void trace(const Args&... args)
{
    if (level() <= Level::Trace) write(Level::Trace, detail::concat(args...));
}

template <typename... Args>
void debug(const Args&... args)
{
    if (level() <= Level::Debug) write(Level::Debug, detail::concat(args...));
}

template <typename... Args>
void info(const Args&... args)
{
    if (level() <= Level::Info) write(Level::Info, detail::concat(args...));
}

template <typename... Args>
void warn(const Args&... args)
{
    if (level() <= Level::Warn) write(Level::Warn, detail::concat(args...));
}

template <typename... Args>
void error(const Args&... args)
{
    if (level() <= Level::Error) write(Level::Error, detail::concat(args...));
}

} // namespace tms::log
