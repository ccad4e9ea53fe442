#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tms::proto {

enum class MsgType : std::uint8_t {
    Login = 0x01,
    Telemetry = 0x02,
    RouteAdvisory = 0x03,
    Warning = 0x04,
    Ack = 0x05,
    App = 0x06,
};

const char* msg_type_name(MsgType type);
std::optional<MsgType> msg_type_from_byte(std::uint8_t byte);

struct LoginBody {
    bool operator==(const LoginBody&) const = default;
};

struct TelemetryBody {
    std::uint64_t timestamp_ms = 0;
    double latitude = 0.0;  // degrees, [-90, 90]
    double longitude = 0.0; // degrees, [-180, 180]
    double speed_mps = 0.0; // >= 0

    bool operator==(const TelemetryBody&) const = default;
};

struct RouteAdvisoryBody {
    std::vector<std::string> nodes; // ordered node ids

    bool operator==(const RouteAdvisoryBody&) const = default;
};

struct WarningBody {
    std::uint8_t severity = 0;
    std::string text;

    bool operator==(const WarningBody&) const = default;
};

struct AckBody {
    std::uint32_t sequence = 0;

    bool operator==(const AckBody&) const = default;
};

struct AppBody {
    std::vector<std::uint8_t> data;

    bool operator==(const AppBody&) const = default;
};

using Body = std::variant<LoginBody, TelemetryBody, RouteAdvisoryBody, WarningBody, AckBody, AppBody>;

/// One protocol message. The vehicle id is the UTF-8 session identifier,
/// 1-255 bytes on the wire.
struct Message {
    MsgType type = MsgType::Login;
    std::string vehicle_id;
    Body body;

    bool operator==(const Message&) const = default;
};

/// Message constructors with field validation (the message factory). Each
/// throws ValidationError naming the offending field.
Message make_login(std::string vehicle_id);
Message make_telemetry(std::string vehicle_id, std::uint64_t timestamp_ms, double latitude,
                       double longitude, double speed_mps);
Message make_route_advisory(std::string vehicle_id, std::vector<std::string> nodes);
Message make_warning(std::string vehicle_id, std::uint8_t severity, std::string text);
Message make_ack(std::string vehicle_id, std::uint32_t sequence);
Message make_app(std::string vehicle_id, std::vector<std::uint8_t> data);
Message make_message(MsgType type, std::string vehicle_id, Body body);

/// Checks every structural constraint; throws ValidationError on the first
/// violation. Encoding and decoding both go through this, so a Message that
/// exists is valid.
void validate_message(const Message& msg);

} // namespace tms::proto
