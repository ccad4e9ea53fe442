#pragma once

#include <any>
#include <cstdint>
#include <string>

namespace tms::event {

/// A typed event: the unit of decision-module activation. Immutable once
/// built; propagation never mutates the descriptor.
class EventDescriptor {
public:
    /// Throws ValidationError when event_type is empty.
    EventDescriptor(std::string event_type, std::string source_target, std::any payload,
                    std::int64_t timestamp_ms);

    const std::string& event_type() const noexcept { return event_type_; }

    /// Identifier of the logical originator, e.g. a vehicle id.
    const std::string& source_target() const noexcept { return source_target_; }

    /// Opaque application data; may be empty.
    const std::any& payload() const noexcept { return payload_; }

    std::int64_t timestamp_ms() const noexcept { return timestamp_ms_; }

private:
    std::string event_type_;
    std::string source_target_;
    std::any payload_;
    std::int64_t timestamp_ms_;
};

} // namespace tms::event
