#pragma once

#include "tms/proto/message.hpp"

#include <cstdint>
#include <string>

namespace tms::comms {

/// A decoded inbound message paired with the session it arrived on; the
/// element of the global queue. Only successfully decoded post-login frames
/// become envelopes.
struct InboundEnvelope {
    std::string vehicle_id;
    proto::Message message;
    std::int64_t received_at_ms = 0;
};

} // namespace tms::comms
