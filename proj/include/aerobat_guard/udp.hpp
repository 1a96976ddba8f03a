// Optional UDP transport for the pose/command packets (POSIX sockets).
#pragma once

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aguard::telemetry {

/// Default pose port, matching the usual VRPN server port.
inline constexpr std::uint16_t kDefaultPosePort = 3883;
inline constexpr std::uint16_t kDefaultCommandPort = 3884;

class SocketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bound IPv4 datagram socket. Port 0 picks an ephemeral port.
class UdpEndpoint {
public:
    explicit UdpEndpoint(std::uint16_t port = 0, const std::string& bind_addr = "127.0.0.1") {
        fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
        if (fd_ < 0) throw SocketError(std::string("socket: ") + std::strerror(errno));
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(port);
        if (::inet_pton(AF_INET, bind_addr.c_str(), &addr.sin_addr) != 1) {
            ::close(fd_);
            throw SocketError("bad bind address " + bind_addr);
        }
        if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
            const std::string msg = std::strerror(errno);
            ::close(fd_);
            throw SocketError("bind: " + msg);
        }
    }

    UdpEndpoint(const UdpEndpoint&) = delete;
    UdpEndpoint& operator=(const UdpEndpoint&) = delete;
    UdpEndpoint(UdpEndpoint&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
    UdpEndpoint& operator=(UdpEndpoint&& o) noexcept {
        if (this != &o) {
            close();
            fd_ = o.fd_;
            o.fd_ = -1;
        }
        return *this;
    }
    ~UdpEndpoint() { close(); }

    std::uint16_t port() const {
        sockaddr_in addr{};
        socklen_t len = sizeof addr;
        ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
        return ntohs(addr.sin_port);
    }

    void send_to(std::span<const std::byte> data, std::uint16_t port, const std::string& host = "127.0.0.1") const {
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(port);
        if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) throw SocketError("bad host " + host);
        const auto n = ::sendto(fd_, data.data(), data.size(), 0, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
        if (n < 0 || static_cast<std::size_t>(n) != data.size()) {
            throw SocketError(std::string("sendto: ") + std::strerror(errno));
        }
    }

    /// Next datagram, or nullopt after `timeout_ms` without traffic.
    std::optional<std::vector<std::byte>> receive(int timeout_ms) const {
        pollfd pfd{fd_, POLLIN, 0};
        const int r = ::poll(&pfd, 1, timeout_ms);
        if (r < 0) throw SocketError(std::string("poll: ") + std::strerror(errno));
        if (r == 0) return std::nullopt;
        std::vector<std::byte> buf(2048);
        const auto n = ::recv(fd_, buf.data(), buf.size(), 0);
        if (n < 0) throw SocketError(std::string("recv: ") + std::strerror(errno));
        buf.resize(static_cast<std::size_t>(n));
        return buf;
    }

private:
    void close() {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
    }

    int fd_ = -1;
};

}  // namespace aguard::telemetry
