#include "tms/event/event.hpp"

#include "tms/util/error.hpp"

namespace tms::event {

EventDescriptor::EventDescriptor(std::string event_type, std::string source_target,
                                 std::any payload, std::int64_t timestamp_ms)
    : event_type_(std::move(event_type)),
      source_target_(std::move(source_target)),
      payload_(std::move(payload)),
      timestamp_ms_(timestamp_ms)
{
    if (event_type_.empty()) {
        throw ValidationError("event_type", "must be non-empty");
    }
}

} // namespace tms::event
