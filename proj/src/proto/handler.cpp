#include "tms/proto/handler.hpp"

namespace tms::proto {

ProtocolHandler::ProtocolHandler(Options options)
    : source_("protocol"), event_type_map_(std::move(options.event_type_map))
{
    event_type_map_.try_emplace(MsgType::Login, kEventVehicleLoggedIn);
    for (auto type : {MsgType::Telemetry, MsgType::RouteAdvisory, MsgType::Warning,
                      MsgType::Ack, MsgType::App}) {
        event_type_map_.try_emplace(type, kEventMessageReceived);
    }
}

const std::string& ProtocolHandler::event_type_for(MsgType type) const
{
    return event_type_map_.at(type);
}

void ProtocolHandler::handle_inbound_message(const comms::InboundEnvelope& envelope)
{
    source_.propagate(event::EventDescriptor(event_type_for(envelope.message.type),
                                             envelope.vehicle_id, envelope.message,
                                             envelope.received_at_ms));
}

void ProtocolHandler::on_vehicle_logged_in(const std::string& vehicle_id, std::int64_t at_ms)
{
    source_.propagate(event::EventDescriptor(kEventVehicleLoggedIn, vehicle_id, {}, at_ms));
}

void ProtocolHandler::on_vehicle_logged_out(const std::string& vehicle_id, std::int64_t at_ms)
{
    source_.propagate(event::EventDescriptor(kEventVehicleLoggedOut, vehicle_id, {}, at_ms));
}

} // namespace tms::proto
