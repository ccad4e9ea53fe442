#include "tms/proto/codec.hpp"

#include "tms/util/error.hpp"

#include <bit>
#include <cstdio>
#include <cstring>

namespace tms::proto {

namespace {

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v)
{
    out.push_back(v);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v)
{
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v)
{
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v)
{
    put_u32(out, static_cast<std::uint32_t>(v >> 32));
    put_u32(out, static_cast<std::uint32_t>(v));
}

void put_f64(std::vector<std::uint8_t>& out, double v)
{
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void put_bytes(std::vector<std::uint8_t>& out, const void* data, std::size_t len)
{
    const auto* p = static_cast<const std::uint8_t*>(data);
    out.insert(out.end(), p, p + len);
}

[[noreturn]] void decode_fail(const std::string& message)
{
    throw TmsError(Errc::DecodeError, message);
}

class BodyReader {
public:
    explicit BodyReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::size_t remaining() const { return data_.size() - pos_; }

    std::uint8_t u8()
    {
        require(1);
        return data_[pos_++];
    }

    std::uint16_t u16()
    {
        require(2);
        const std::uint16_t v = (static_cast<std::uint16_t>(data_[pos_]) << 8) |
                                static_cast<std::uint16_t>(data_[pos_ + 1]);
        pos_ += 2;
        return v;
    }

    std::uint32_t u32()
    {
        require(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v = (v << 8) | data_[pos_ + static_cast<std::size_t>(i)];
        }
        pos_ += 4;
        return v;
    }

    std::uint64_t u64()
    {
        const std::uint64_t hi = u32();
        return (hi << 32) | u32();
    }

    double f64() { return std::bit_cast<double>(u64()); }

    std::string str(std::size_t len)
    {
        require(len);
        std::string s(reinterpret_cast<const char*>(data_.data() + pos_), len);
        pos_ += len;
        return s;
    }

    std::vector<std::uint8_t> rest()
    {
        std::vector<std::uint8_t> bytes(data_.begin() + static_cast<long>(pos_), data_.end());
        pos_ = data_.size();
        return bytes;
    }

private:
    void require(std::size_t n)
    {
        if (remaining() < n) {
            decode_fail("truncated body");
        }
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

void encode_body(std::vector<std::uint8_t>& out, const Message& msg)
{
    switch (msg.type) {
    case MsgType::Login:
        break;
    case MsgType::Telemetry: {
        const auto& t = std::get<TelemetryBody>(msg.body);
        put_u64(out, t.timestamp_ms);
        put_f64(out, t.latitude);
        put_f64(out, t.longitude);
        put_f64(out, t.speed_mps);
        break;
    }
    case MsgType::RouteAdvisory: {
        const auto& r = std::get<RouteAdvisoryBody>(msg.body);
        put_u16(out, static_cast<std::uint16_t>(r.nodes.size()));
        for (const auto& node : r.nodes) {
            put_u16(out, static_cast<std::uint16_t>(node.size()));
            put_bytes(out, node.data(), node.size());
        }
        break;
    }
    case MsgType::Warning: {
        const auto& w = std::get<WarningBody>(msg.body);
        put_u8(out, w.severity);
        put_bytes(out, w.text.data(), w.text.size());
        break;
    }
    case MsgType::Ack:
        put_u32(out, std::get<AckBody>(msg.body).sequence);
        break;
    case MsgType::App: {
        const auto& a = std::get<AppBody>(msg.body);
        put_bytes(out, a.data.data(), a.data.size());
        break;
    }
    }
}

Body decode_body(MsgType type, BodyReader& r)
{
    switch (type) {
    case MsgType::Login:
        return LoginBody{};
    case MsgType::Telemetry: {
        TelemetryBody t;
        t.timestamp_ms = r.u64();
        t.latitude = r.f64();
        t.longitude = r.f64();
        t.speed_mps = r.f64();
        return t;
    }
    case MsgType::RouteAdvisory: {
        RouteAdvisoryBody route;
        const std::uint16_t count = r.u16();
        route.nodes.reserve(count);
        for (std::uint16_t i = 0; i < count; ++i) {
            const std::uint16_t len = r.u16();
            route.nodes.push_back(r.str(len));
        }
        return route;
    }
    case MsgType::Warning: {
        WarningBody w;
        w.severity = r.u8();
        w.text = r.str(r.remaining());
        return w;
    }
    case MsgType::Ack:
        return AckBody{r.u32()};
    case MsgType::App:
        return AppBody{r.rest()};
    }
    decode_fail("unreachable message type");
}

// Parses the N bytes following the length field.
Message parse_payload(std::span<const std::uint8_t> payload)
{
    BodyReader r(payload);
    const std::uint8_t type_byte = r.u8();
    const auto type = msg_type_from_byte(type_byte);
    if (!type) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "0x%02x", type_byte);
        decode_fail(std::string("unknown msg_type ") + buf);
    }
    const std::uint16_t id_len = r.u16();
    if (id_len == 0) {
        decode_fail("empty vehicle id");
    }
    if (id_len > 255) {
        decode_fail("vehicle id longer than 255 bytes");
    }
    Message msg;
    msg.type = *type;
    msg.vehicle_id = r.str(id_len);
    msg.body = decode_body(*type, r);
    if (r.remaining() != 0) {
        decode_fail("trailing bytes after body");
    }
    try {
        validate_message(msg);
    } catch (const ValidationError& e) {
        decode_fail(e.what());
    }
    return msg;
}

std::uint32_t parse_length_header(const std::uint8_t* hdr)
{
    return (static_cast<std::uint32_t>(hdr[0]) << 24) |
           (static_cast<std::uint32_t>(hdr[1]) << 16) |
           (static_cast<std::uint32_t>(hdr[2]) << 8) | static_cast<std::uint32_t>(hdr[3]);
}

void check_declared_length(std::uint32_t n)
{
    if (n > kMaxFrameBytes) {
        decode_fail("frame too large: declared " + std::to_string(n) + " bytes");
    }
    if (n < 3) { // msg_type byte + id length field
        decode_fail("frame too short: declared " + std::to_string(n) + " bytes");
    }
}

} // namespace

std::vector<std::uint8_t> marshal_frame(const Message& msg)
{
    try {
        validate_message(msg);
    } catch (const ValidationError& e) {
        throw TmsError(Errc::EncodeError, e.what());
    }
    std::vector<std::uint8_t> payload;
    payload.reserve(64);
    put_u8(payload, static_cast<std::uint8_t>(msg.type));
    put_u16(payload, static_cast<std::uint16_t>(msg.vehicle_id.size()));
    put_bytes(payload, msg.vehicle_id.data(), msg.vehicle_id.size());
    encode_body(payload, msg);
    if (payload.size() > kMaxFrameBytes) {
        throw TmsError(Errc::EncodeError,
                       "frame exceeds " + std::to_string(kMaxFrameBytes) + " bytes");
    }
    std::vector<std::uint8_t> frame;
    frame.reserve(4 + payload.size());
    put_u32(frame, static_cast<std::uint32_t>(payload.size()));
    frame.insert(frame.end(), payload.begin(), payload.end());
    return frame;
}

DecodedFrame decode_frame(std::span<const std::uint8_t> buf)
{
    if (buf.size() < 4) {
        throw TmsError(Errc::TruncatedStream, "buffer ends inside length header");
    }
    const std::uint32_t n = parse_length_header(buf.data());
    check_declared_length(n);
    if (buf.size() < 4 + static_cast<std::size_t>(n)) {
        throw TmsError(Errc::TruncatedStream, "buffer ends inside frame body");
    }
    return {parse_payload(buf.subspan(4, n)), 4 + static_cast<std::size_t>(n)};
}

std::optional<Message> read_frame(io::ByteSource& in)
{
    std::uint8_t hdr[4];
    switch (io::read_exact(in, hdr, sizeof hdr)) {
    case io::ReadOutcome::EndOfStream:
        return std::nullopt;
    case io::ReadOutcome::Truncated:
        throw TmsError(Errc::TruncatedStream, "stream ended inside length header");
    case io::ReadOutcome::Complete:
        break;
    }
    const std::uint32_t n = parse_length_header(hdr);
    check_declared_length(n);
    std::vector<std::uint8_t> payload(n);
    if (io::read_exact(in, payload.data(), payload.size()) != io::ReadOutcome::Complete) {
        throw TmsError(Errc::TruncatedStream, "stream ended inside frame body");
    }
    return parse_payload(payload);
}

void write_frame(io::ByteSink& out, const Message& msg)
{
    const auto frame = marshal_frame(msg);
    out.write_all(frame.data(), frame.size());
}

} // namespace tms::proto
