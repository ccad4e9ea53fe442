#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace tms::io {

/// Byte-stream read end; sockets and in-memory buffers implement it.
class ByteSource {
public:
    virtual ~ByteSource() = default;

    /// Reads up to `len` bytes into `dst`. Returns the number of bytes read;
    /// 0 means end of stream. Throws std::system_error on transport failure.
    virtual std::size_t read_some(std::uint8_t* dst, std::size_t len) = 0;
};

/// Byte-stream write end.
class ByteSink {
public:
    virtual ~ByteSink() = default;

    /// Writes all `len` bytes or throws std::system_error.
    virtual void write_all(const std::uint8_t* src, std::size_t len) = 0;
};

enum class ReadOutcome { Complete, EndOfStream, Truncated };

/// Reads exactly `len` bytes. EndOfStream means zero bytes were available;
/// Truncated means the stream ended partway through.
ReadOutcome read_exact(ByteSource& in, std::uint8_t* dst, std::size_t len);

/// ByteSource over a borrowed buffer; used by codec tests.
class MemorySource : public ByteSource {
public:
    explicit MemorySource(std::span<const std::uint8_t> data) : data_(data) {}

    std::size_t read_some(std::uint8_t* dst, std::size_t len) override;

    std::size_t remaining() const { return data_.size() - pos_; }

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace tms::io
