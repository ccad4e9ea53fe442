#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tms/proto/codec.hpp"
#include "tms/proto/message.hpp"
#include "tms/util/error.hpp"

#include "support/generators.hpp"

#include <bit>
#include <random>
#include <span>

using namespace tms;
using namespace tms::proto;

namespace {

std::vector<std::uint8_t> bytes(std::initializer_list<int> values)
{
    std::vector<std::uint8_t> out;
    for (int v : values) {
        out.push_back(static_cast<std::uint8_t>(v));
    }
    return out;
}

} // namespace

// Hand-encoded from the frame layout: 4-byte BE length, 1-byte type,
// 2-byte BE id length, id bytes, then the body.

TEST_CASE("LOGIN 'v1' encodes to the frozen byte vector")
{
    const auto frame = marshal_frame(make_login("v1"));
    CHECK(frame == bytes({0x00, 0x00, 0x00, 0x05, 0x01, 0x00, 0x02, 0x76, 0x31}));
}

TEST_CASE("APP 'v1' with empty body encodes to the frozen byte vector")
{
    const auto frame = marshal_frame(make_app("v1", {}));
    CHECK(frame == bytes({0x00, 0x00, 0x00, 0x05, 0x06, 0x00, 0x02, 0x76, 0x31}));
}

TEST_CASE("ACK 'v1' sequence 0x01020304: frozen vector and inverse")
{
    const auto expected = bytes(
        {0x00, 0x00, 0x00, 0x09, 0x05, 0x00, 0x02, 0x76, 0x31, 0x01, 0x02, 0x03, 0x04});
    CHECK(marshal_frame(make_ack("v1", 0x01020304u)) == expected);
    const auto decoded = decode_frame(expected);
    CHECK(decoded.consumed == expected.size());
    CHECK(decoded.message == make_ack("v1", 0x01020304u));
}

TEST_CASE("WARNING 'v1' severity 2 text 'go': frozen vector")
{
    const auto expected = bytes(
        {0x00, 0x00, 0x00, 0x08, 0x04, 0x00, 0x02, 0x76, 0x31, 0x02, 0x67, 0x6F});
    CHECK(marshal_frame(make_warning("v1", 2, "go")) == expected);
    CHECK(decode_frame(expected).message == make_warning("v1", 2, "go"));
}

TEST_CASE("ROUTE_ADVISORY 'v1' nodes [A,B]: frozen vector")
{
    const auto expected =
        bytes({0x00, 0x00, 0x00, 0x0D, 0x03, 0x00, 0x02, 0x76, 0x31, 0x00, 0x02, 0x00, 0x01,
               0x41, 0x00, 0x01, 0x42});
    CHECK(marshal_frame(make_route_advisory("v1", {"A", "B"})) == expected);
    CHECK(decode_frame(expected).message == make_route_advisory("v1", {"A", "B"}));
}

TEST_CASE("decoding the LOGIN vector yields LOGIN('v1')")
{
    const auto frame = bytes({0x00, 0x00, 0x00, 0x05, 0x01, 0x00, 0x02, 0x76, 0x31});
    const auto decoded = decode_frame(frame);
    CHECK(decoded.consumed == 9);
    CHECK(decoded.message.type == MsgType::Login);
    CHECK(decoded.message.vehicle_id == "v1");
}

TEST_CASE("round-trip identity on randomized messages of every type")
{
    std::mt19937 rng(20240601);
    int per_type[7] = {0};
    for (int i = 0; i < 2000; ++i) {
        const Message msg = testutil::random_message(rng);
        ++per_type[static_cast<int>(msg.type)];
        const auto frame = marshal_frame(msg);
        const auto decoded = decode_frame(frame);
        CHECK(decoded.consumed == frame.size());
        CHECK(decoded.message == msg);
    }
    for (int t = 1; t <= 6; ++t) {
        CHECK(per_type[t] > 0);
    }
}

TEST_CASE("framing self-synchronization: two concatenated frames decode in order")
{
    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        const Message m1 = testutil::random_message(rng);
        const Message m2 = testutil::random_message(rng);
        auto buffer = marshal_frame(m1);
        const auto second = marshal_frame(m2);
        buffer.insert(buffer.end(), second.begin(), second.end());

        const auto first_decoded = decode_frame(buffer);
        CHECK(first_decoded.message == m1);
        const auto second_decoded = decode_frame(
            std::span<const std::uint8_t>(buffer).subspan(first_decoded.consumed));
        CHECK(second_decoded.message == m2);
        CHECK(first_decoded.consumed + second_decoded.consumed == buffer.size());
    }
}

TEST_CASE("unknown message type is a DecodeError")
{
    const auto frame = bytes({0x00, 0x00, 0x00, 0x05, 0x7F, 0x00, 0x02, 0x76, 0x31});
    try {
        decode_frame(frame);
        FAIL("expected DecodeError");
    } catch (const TmsError& e) {
        CHECK(e.code() == Errc::DecodeError);
        CHECK(std::string(e.what()).find("0x7f") != std::string::npos);
    }
}

TEST_CASE("declared length beyond the 1 MiB cap is a DecodeError")
{
    const auto frame = bytes({0x00, 0x20, 0x00, 0x00}); // 2 MiB declared
    try {
        decode_frame(frame);
        FAIL("expected DecodeError");
    } catch (const TmsError& e) {
        CHECK(e.code() == Errc::DecodeError);
        CHECK(std::string(e.what()).find("too large") != std::string::npos);
    }
}

TEST_CASE("empty vehicle id is a DecodeError")
{
    const auto frame = bytes({0x00, 0x00, 0x00, 0x03, 0x01, 0x00, 0x00});
    CHECK_THROWS_AS(decode_frame(frame), TmsError);
}

TEST_CASE("invalid UTF-8 vehicle id is a DecodeError")
{
    // 0xFF is never valid UTF-8.
    const auto frame = bytes({0x00, 0x00, 0x00, 0x05, 0x01, 0x00, 0x02, 0xFF, 0x31});
    try {
        decode_frame(frame);
        FAIL("expected DecodeError");
    } catch (const TmsError& e) {
        CHECK(e.code() == Errc::DecodeError);
    }
}

TEST_CASE("out-of-range telemetry is a DecodeError")
{
    // Encode a valid telemetry frame, then overwrite the latitude field
    // (offset 4+1+2+2+8) with the encoding of 123.0.
    auto frame = marshal_frame(make_telemetry("v1", 0, 0.0, 0.0, 0.0));
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(123.0);
    for (int i = 0; i < 8; ++i) {
        frame[17 + static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>(bits >> (56 - 8 * i));
    }
    try {
        decode_frame(frame);
        FAIL("expected DecodeError");
    } catch (const TmsError& e) {
        CHECK(e.code() == Errc::DecodeError);
        CHECK(std::string(e.what()).find("latitude") != std::string::npos);
    }
}

TEST_CASE("trailing bytes after the body are a DecodeError")
{
    // ACK with one extra byte inside the declared length.
    const auto frame = bytes(
        {0x00, 0x00, 0x00, 0x0A, 0x05, 0x00, 0x02, 0x76, 0x31, 0x01, 0x02, 0x03, 0x04, 0xEE});
    CHECK_THROWS_AS(decode_frame(frame), TmsError);
}

TEST_CASE("buffer ending mid-frame is TruncatedStream")
{
    auto frame = marshal_frame(make_login("v1"));
    frame.pop_back();
    try {
        decode_frame(frame);
        FAIL("expected TruncatedStream");
    } catch (const TmsError& e) {
        CHECK(e.code() == Errc::TruncatedStream);
    }
    try {
        decode_frame(bytes({0x00, 0x00}));
        FAIL("expected TruncatedStream");
    } catch (const TmsError& e) {
        CHECK(e.code() == Errc::TruncatedStream);
    }
}

TEST_CASE("stream reads: clean EOF, mid-frame EOF, sequential frames")
{
    const auto m1 = make_login("v1");
    const auto m2 = make_telemetry("v1", 42, 48.85, 2.35, 13.5);
    auto buffer = marshal_frame(m1);
    const auto f2 = marshal_frame(m2);
    buffer.insert(buffer.end(), f2.begin(), f2.end());

    io::MemorySource stream(buffer);
    CHECK(read_frame(stream) == m1);
    CHECK(read_frame(stream) == m2);
    CHECK_FALSE(read_frame(stream).has_value()); // clean EOF at the boundary

    std::vector<std::uint8_t> partial(buffer.begin(), buffer.begin() + 7);
    io::MemorySource truncated(partial);
    try {
        read_frame(truncated);
        FAIL("expected TruncatedStream");
    } catch (const TmsError& e) {
        CHECK(e.code() == Errc::TruncatedStream);
    }
}

TEST_CASE("message factory validation")
{
    CHECK_NOTHROW(make_telemetry("v1", 0, 48.85, 2.35, 0.0));

    try {
        make_telemetry("v1", 0, 123.0, 0.0, 0.0);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "latitude");
    }
    try {
        make_login(std::string(256, 'x'));
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "vehicle_id");
    }
    CHECK_THROWS_AS(make_login(""), ValidationError);
    CHECK_THROWS_AS(make_telemetry("v1", 0, 0.0, 200.0, 0.0), ValidationError);
    CHECK_THROWS_AS(make_telemetry("v1", 0, 0.0, 0.0, -1.0), ValidationError);
    CHECK_THROWS_AS(make_warning("v1", 1, "\xFF\xFE"), ValidationError);
    CHECK_THROWS_AS(make_route_advisory("v1", {""}), ValidationError);
}

TEST_CASE("encode errors mirror the frame constraints")
{
    Message bad;
    bad.type = MsgType::Login;
    bad.vehicle_id = ""; // bypasses the factory on purpose
    bad.body = LoginBody{};
    try {
        marshal_frame(bad);
        FAIL("expected EncodeError");
    } catch (const TmsError& e) {
        CHECK(e.code() == Errc::EncodeError);
    }

    // A frame that would exceed the cap is refused at encode time.
    Message huge;
    huge.type = MsgType::App;
    huge.vehicle_id = "v1";
    huge.body = AppBody{std::vector<std::uint8_t>(kMaxFrameBytes, 0xAB)};
    try {
        marshal_frame(huge);
        FAIL("expected EncodeError");
    } catch (const TmsError& e) {
        CHECK(e.code() == Errc::EncodeError);
    }
}
