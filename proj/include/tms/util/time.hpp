#pragma once

#include <chrono>
#include <cstdint>

namespace tms::util {

/// Milliseconds since the Unix epoch.
inline std::int64_t now_ms()
{
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

/// Monotonic milliseconds, for measuring intervals.
inline std::int64_t steady_ms()
{
    using namespace std::chrono;
    return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
}

} // namespace tms::util
