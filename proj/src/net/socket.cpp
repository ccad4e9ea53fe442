#include "tms/net/socket.hpp"

#include "tms/util/error.hpp"

#include <cerrno>
#include <cstring>
#include <system_error>
#include <utility>

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

namespace tms::net {

namespace {

[[noreturn]] void throw_errno(const char* what)
{
    throw std::system_error(errno, std::generic_category(), what);
}

} // namespace

Socket::~Socket()
{
    close();
}

Socket::Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

Socket& Socket::operator=(Socket&& other) noexcept
{
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

Socket Socket::connect_to(const std::string& host, std::uint16_t port)
{
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* results = nullptr;
    const std::string service = std::to_string(port);
    if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &results) != 0) {
        throw TmsError(Errc::ConnectError, "cannot resolve host '" + host + "'");
    }
    int fd = -1;
    for (addrinfo* ai = results; ai != nullptr; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) {
            continue;
        }
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            break;
        }
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(results);
    if (fd < 0) {
        throw TmsError(Errc::ConnectError,
                       "cannot connect to " + host + ":" + std::to_string(port));
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return Socket(fd);
}

std::size_t Socket::read_some(std::uint8_t* dst, std::size_t len)
{
    for (;;) {
        const ssize_t n = ::recv(fd_, dst, len, 0);
        if (n >= 0) {
            return static_cast<std::size_t>(n);
        }
        if (errno == EINTR) {
            continue;
        }
        // A locally closed or reset connection ends the stream.
        if (errno == ECONNRESET || errno == EBADF || errno == ENOTCONN) {
            return 0;
        }
        throw_errno("recv");
    }
}

void Socket::write_all(const std::uint8_t* src, std::size_t len)
{
    std::size_t sent = 0;
    while (sent < len) {
        const ssize_t n = ::send(fd_, src + sent, len - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw_errno("send");
        }
        sent += static_cast<std::size_t>(n);
    }
}

void Socket::shutdown_both() noexcept
{
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_RDWR);
    }
}

void Socket::close() noexcept
{
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

void Socket::set_send_buffer(int bytes)
{
    if (fd_ >= 0 && bytes > 0) {
        ::setsockopt(fd_, SOL_SOCKET, SO_SNDBUF, &bytes, sizeof bytes);
    }
}

ListenSocket::~ListenSocket()
{
    close();
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

void ListenSocket::bind_listen(std::uint16_t port)
{
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) {
        throw_errno("socket");
    }
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_ANY);
    addr.sin_port = htons(port);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        const int err = errno;
        ::close(fd);
        throw TmsError(Errc::BindError, "cannot bind port " + std::to_string(port) + ": " +
                                            std::strerror(err));
    }
    if (::listen(fd, SOMAXCONN) != 0) {
        const int err = errno;
        ::close(fd);
        throw TmsError(Errc::BindError, "cannot listen on port " + std::to_string(port) +
                                            ": " + std::strerror(err));
    }

    sockaddr_in bound{};
    socklen_t bound_len = sizeof bound;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &bound_len);
    port_ = ntohs(bound.sin_port);
    fd_ = fd;
    closing_.store(false);
}

std::optional<Socket> ListenSocket::accept()
{
    for (;;) {
        const int fd = ::accept(fd_, nullptr, nullptr);
        if (fd >= 0) {
            int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return Socket(fd);
        }
        if (closing_.load()) {
            return std::nullopt;
        }
        if (errno == EINTR || errno == ECONNABORTED) {
            continue;
        }
        throw_errno("accept");
    }
}

// Wakes the acceptor via shutdown; the fd itself is released in the
// destructor, after the accept thread is known to have exited. Closing it
// here could race a blocked accept() against fd-number reuse.
void ListenSocket::close() noexcept
{
    closing_.store(true);
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_RDWR);
    }
}

} // namespace tms::net
