#pragma once

#include "tms/proto/message.hpp"
#include "tms/util/io.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tms::proto {

/// Cap on the byte count following the 4-byte length field. Larger declared
/// lengths are a DecodeError; encoding refuses to produce them.
inline constexpr std::size_t kMaxFrameBytes = 1u << 20;

/// Frame layout (all integers big-endian, f64 as IEEE-754 binary64):
///   u32 length N (bytes after this field)
///   u8  msg_type
///   u16 vehicle-id byte length L (1..255)
///   L bytes UTF-8 vehicle id
///   type-specific body (see docs/rvtp.md)
/// Throws TmsError{EncodeError} on invalid input.
std::vector<std::uint8_t> marshal_frame(const Message& msg);

struct DecodedFrame {
    Message message;
    std::size_t consumed; // 4 + N
};

/// Decodes one frame from the start of `buf`. Throws TmsError{DecodeError}
/// for structural violations and TmsError{TruncatedStream} when the buffer
/// ends mid-frame.
DecodedFrame decode_frame(std::span<const std::uint8_t> buf);

/// Reads one frame from a stream. Returns nullopt on a clean end of stream
/// at a frame boundary; throws TmsError{TruncatedStream} when the stream
/// ends mid-frame and TmsError{DecodeError} on structural violations.
std::optional<Message> read_frame(io::ByteSource& in);

/// Marshals and writes one frame.
void write_frame(io::ByteSink& out, const Message& msg);

} // namespace tms::proto
