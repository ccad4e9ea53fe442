#include "tms/proto/message.hpp"

#include "tms/util/error.hpp"
#include "tms/util/utf8.hpp"

#include <cmath>
#include <limits>

namespace tms::proto {

const char* msg_type_name(MsgType type)
{
    switch (type) {
    case MsgType::Login: return "LOGIN";
    case MsgType::Telemetry: return "TELEMETRY";
    case MsgType::RouteAdvisory: return "ROUTE_ADVISORY";
    case MsgType::Warning: return "WARNING";
    case MsgType::Ack: return "ACK";
    case MsgType::App: return "APP";
    }
    return "?";
}

std::optional<MsgType> msg_type_from_byte(std::uint8_t byte)
{
    if (byte >= 0x01 && byte <= 0x06) {
        return static_cast<MsgType>(byte);
    }
    return std::nullopt;
}

namespace {

constexpr std::size_t kMaxVehicleIdBytes = 255;
constexpr std::size_t kMaxRouteNodes = 65535;
constexpr std::size_t kMaxNodeIdBytes = 65535;

MsgType body_type(const Body& body)
{
    struct Visitor {
        MsgType operator()(const LoginBody&) const { return MsgType::Login; }
        MsgType operator()(const TelemetryBody&) const { return MsgType::Telemetry; }
        MsgType operator()(const RouteAdvisoryBody&) const { return MsgType::RouteAdvisory; }
        MsgType operator()(const WarningBody&) const { return MsgType::Warning; }
        MsgType operator()(const AckBody&) const { return MsgType::Ack; }
        MsgType operator()(const AppBody&) const { return MsgType::App; }
    };
    return std::visit(Visitor{}, body);
}

} // namespace

void validate_message(const Message& msg)
{
    if (body_type(msg.body) != msg.type) {
        throw ValidationError("body", "body variant does not match message type");
    }
    if (msg.vehicle_id.empty()) {
        throw ValidationError("vehicle_id", "must be non-empty");
    }
    if (msg.vehicle_id.size() > kMaxVehicleIdBytes) {
        throw ValidationError("vehicle_id", "exceeds 255 bytes");
    }
    if (!util::is_valid_utf8(msg.vehicle_id)) {
        throw ValidationError("vehicle_id", "not valid UTF-8");
    }

    switch (msg.type) {
    case MsgType::Telemetry: {
        const auto& t = std::get<TelemetryBody>(msg.body);
        if (!std::isfinite(t.latitude) || t.latitude < -90.0 || t.latitude > 90.0) {
            throw ValidationError("latitude", "outside [-90, 90]");
        }
        if (!std::isfinite(t.longitude) || t.longitude < -180.0 || t.longitude > 180.0) {
            throw ValidationError("longitude", "outside [-180, 180]");
        }
        if (!std::isfinite(t.speed_mps) || t.speed_mps < 0.0) {
            throw ValidationError("speed", "must be finite and >= 0");
        }
        break;
    }
    case MsgType::RouteAdvisory: {
        const auto& r = std::get<RouteAdvisoryBody>(msg.body);
        if (r.nodes.size() > kMaxRouteNodes) {
            throw ValidationError("nodes", "more than 65535 route nodes");
        }
        for (const auto& node : r.nodes) {
            if (node.empty() || node.size() > kMaxNodeIdBytes) {
                throw ValidationError("nodes", "node id must be 1-65535 bytes");
            }
            if (!util::is_valid_utf8(node)) {
                throw ValidationError("nodes", "node id not valid UTF-8");
            }
        }
        break;
    }
    case MsgType::Warning: {
        const auto& w = std::get<WarningBody>(msg.body);
        if (!util::is_valid_utf8(w.text)) {
            throw ValidationError("text", "not valid UTF-8");
        }
        break;
    }
    case MsgType::Login:
    case MsgType::Ack:
    case MsgType::App:
        break;
    }
}

Message make_message(MsgType type, std::string vehicle_id, Body body)
{
    Message msg{type, std::move(vehicle_id), std::move(body)};
    validate_message(msg);
    return msg;
}

Message make_login(std::string vehicle_id)
{
    return make_message(MsgType::Login, std::move(vehicle_id), LoginBody{});
}

Message make_telemetry(std::string vehicle_id, std::uint64_t timestamp_ms, double latitude,
                       double longitude, double speed_mps)
{
    return make_message(MsgType::Telemetry, std::move(vehicle_id),
                        TelemetryBody{timestamp_ms, latitude, longitude, speed_mps});
}

Message make_route_advisory(std::string vehicle_id, std::vector<std::string> nodes)
{
    return make_message(MsgType::RouteAdvisory, std::move(vehicle_id),
                        RouteAdvisoryBody{std::move(nodes)});
}

Message make_warning(std::string vehicle_id, std::uint8_t severity, std::string text)
{
    return make_message(MsgType::Warning, std::move(vehicle_id),
                        WarningBody{severity, std::move(text)});
}

Message make_ack(std::string vehicle_id, std::uint32_t sequence)
{
    return make_message(MsgType::Ack, std::move(vehicle_id), AckBody{sequence});
}

Message make_app(std::string vehicle_id, std::vector<std::uint8_t> data)
{
    return make_message(MsgType::App, std::move(vehicle_id), AppBody{std::move(data)});
}

} // namespace tms::proto
