#pragma once

#include "tms/util/io.hpp"

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>

namespace tms::net {

/// RAII TCP socket. Move-only; closes on destruction. read_some returns 0 on
/// orderly shutdown and throws std::system_error on transport errors.
class Socket : public io::ByteSource, public io::ByteSink {
public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    ~Socket() override;

    Socket(Socket&& other) noexcept;
    Socket& operator=(Socket&& other) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;

    /// Throws TmsError{ConnectError} when the peer is unreachable.
    static Socket connect_to(const std::string& host, std::uint16_t port);

    std::size_t read_some(std::uint8_t* dst, std::size_t len) override;
    void write_all(const std::uint8_t* src, std::size_t len) override;

    /// Wakes any thread blocked in read/write on this socket.
    void shutdown_both() noexcept;
    void close() noexcept;

    void set_send_buffer(int bytes);

    bool valid() const { return fd_ >= 0; }
    int fd() const { return fd_; }

private:
    int fd_ = -1;
};

/// Listening TCP socket bound to 0.0.0.0. Port 0 picks an ephemeral port;
/// `port()` reports the actual one.
class ListenSocket {
public:
    ListenSocket() = default;
    ~ListenSocket();

    ListenSocket(ListenSocket&&) = delete;
    ListenSocket& operator=(ListenSocket&&) = delete;

    /// Throws TmsError{BindError} when the port is taken.
    void bind_listen(std::uint16_t port);

    /// Blocks for the next connection. Returns nullopt once close() has been
    /// called; throws std::system_error on unexpected failures.
    std::optional<Socket> accept();

    /// Unblocks accept() and releases the port. Idempotent.
    void close() noexcept;

    std::uint16_t port() const { return port_; }
    bool listening() const { return fd_ >= 0 && !closing_.load(); }

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> closing_{false};
};

} // namespace tms::net
