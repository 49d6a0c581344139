#include "duplex/wire.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "duplex/errors.hpp"

namespace duplex {

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
    throw WireError(what + ": " + std::strerror(errno));
}

sockaddr_in make_addr(const std::string& host, std::uint16_t port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        throw WireError("bad address: " + host);
    }
    return addr;
}

}  // namespace

TcpStream::TcpStream(TcpStream&& other) noexcept
    : fd_(other.fd_), buf_(std::move(other.buf_)) {
    other.fd_ = -1;
}

TcpStream& TcpStream::operator=(TcpStream&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = other.fd_;
        buf_ = std::move(other.buf_);
        other.fd_ = -1;
    }
    return *this;
}

TcpStream::~TcpStream() { close(); }

void TcpStream::close() {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

TcpStream TcpStream::connect(const std::string& host, std::uint16_t port) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw_errno("socket");
    sockaddr_in addr = make_addr(host, port);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd);
        throw_errno("connect " + host + ":" + std::to_string(port));
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return TcpStream(fd);
}

void TcpStream::write_line(std::string_view line) {
    if (fd_ < 0) throw WireError("write on closed stream");
    std::string msg(line);
    msg.push_back('\n');
    std::size_t off = 0;
    while (off < msg.size()) {
        ssize_t n = ::send(fd_, msg.data() + off, msg.size() - off, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw_errno("send");
        }
        off += static_cast<std::size_t>(n);
    }
}

std::optional<std::string> TcpStream::read_line(int deadline_ms) {
    if (fd_ < 0) throw WireError("read on closed stream");
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::milliseconds(deadline_ms);
    for (;;) {
        auto nl = buf_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buf_.substr(0, nl);
            buf_.erase(0, nl + 1);
            return line;
        }
        int wait_ms = -1;
        if (deadline_ms >= 0) {
            auto remain = std::chrono::duration_cast<std::chrono::milliseconds>(
                              deadline - clock::now())
                              .count();
            if (remain <= 0) return std::nullopt;
            wait_ms = static_cast<int>(remain);
        }
        pollfd pfd{fd_, POLLIN, 0};
        int pr = ::poll(&pfd, 1, wait_ms);
        if (pr < 0) {
            if (errno == EINTR) continue;
            throw_errno("poll");
        }
        if (pr == 0) return std::nullopt;
        char chunk[4096];
        ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw_errno("recv");
        }
        if (n == 0) throw WireError("connection closed by peer");
        buf_.append(chunk, static_cast<std::size_t>(n));
    }
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint) {
    auto colon = endpoint.rfind(':');
    std::string host = colon == std::string::npos ? "" : endpoint.substr(0, colon);
    std::string port_s =
        colon == std::string::npos ? endpoint : endpoint.substr(colon + 1);
    if (host.empty()) host = "127.0.0.1";
    int port = 0;
    try {
        port = std::stoi(port_s);
    } catch (const std::exception&) {
        throw ConfigError("bad endpoint: " + endpoint);
    }
    if (port <= 0 || port > 65535) throw ConfigError("bad endpoint port: " + endpoint);
    return {host, static_cast<std::uint16_t>(port)};
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw_errno("socket");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr = make_addr(host, port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        int e = errno;
        ::close(fd_);
        errno = e;
        throw_errno("bind " + host + ":" + std::to_string(port));
    }
    if (::listen(fd_, 8) != 0) {
        int e = errno;
        ::close(fd_);
        errno = e;
        throw_errno("listen");
    }
    socklen_t len = sizeof(addr);
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
        int e = errno;
        ::close(fd_);
        errno = e;
        throw_errno("getsockname");
    }
    port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::optional<TcpStream> TcpListener::accept(int deadline_ms) {
    pollfd pfd{fd_, POLLIN, 0};
    int pr = ::poll(&pfd, 1, deadline_ms);
    if (pr < 0) throw_errno("poll");
    if (pr == 0) return std::nullopt;
    int cfd = ::accept(fd_, nullptr, nullptr);
    if (cfd < 0) throw_errno("accept");
    int one = 1;
    ::setsockopt(cfd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return TcpStream(cfd);
}

LineServer::LineServer(const std::string& host, std::uint16_t port, Handler handler)
    : listener_(host, port), handler_(std::move(handler)) {
    thread_ = std::thread([this] { run(); });
}

LineServer::~LineServer() { stop(); }

void LineServer::stop() {
    stop_.store(true);
    if (thread_.joinable()) thread_.join();
}

void LineServer::run() {
    while (!stop_.load()) {
        std::optional<TcpStream> conn;
        try {
            conn = listener_.accept(50);
        } catch (const WireError&) {
            break;
        }
        if (!conn) continue;
        try {
            for (;;) {
                auto line = conn->read_line(50);
                if (!line) {
                    if (stop_.load()) return;
                    continue;
                }
                auto reply = handler_(*line);
                if (!reply) break;
                if (!reply->empty()) conn->write_line(*reply);
            }
        } catch (const WireError&) {
            // peer went away; wait for the next connection
        }
    }
}

}  // namespace duplex
