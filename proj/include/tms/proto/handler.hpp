#pragma once

#include "tms/comms/server.hpp"
#include "tms/event/event_source.hpp"
#include "tms/proto/message.hpp"

#include <map>
#include <string>

namespace tms::proto {

/// Converts inbound messages and session lifecycle changes into events on
/// the protocol event source. Parent that source to the kernel root so
/// events bubble to the decision modules. Safe for concurrent calls from
/// multiple dispatchers.
class ProtocolHandler : public comms::InboundHandler {
public:
    struct Options {
        /// Overrides the event type propagated for a message type. Defaults:
        /// LOGIN -> "vehicle_logged_in", everything else ->
        /// "message_received" (the message itself travels in the payload).
        std::map<MsgType, std::string> event_type_map;
    };

    ProtocolHandler() : ProtocolHandler(Options{}) {}
    explicit ProtocolHandler(Options options);

    event::EventSourceNode& event_source() { return source_; }

    const std::string& event_type_for(MsgType type) const;

    /// Propagates exactly one event per envelope; payload is the decoded
    /// Message, source target the session vehicle id.
    void handle_inbound_message(const comms::InboundEnvelope& envelope) override;

    void on_vehicle_logged_in(const std::string& vehicle_id, std::int64_t at_ms) override;
    void on_vehicle_logged_out(const std::string& vehicle_id, std::int64_t at_ms) override;

private:
    event::EventSourceNode source_;
    std::map<MsgType, std::string> event_type_map_;
};

/// Event types used by the framework itself.
inline constexpr const char* kEventVehicleLoggedIn = "vehicle_logged_in";
inline constexpr const char* kEventVehicleLoggedOut = "vehicle_logged_out";
inline constexpr const char* kEventMessageReceived = "message_received";

} // namespace tms::proto
