#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

namespace duplex {

// Newline-delimited message transport over a TCP stream. Lines never contain
// embedded newlines; read_line strips the trailing '\n'.
class TcpStream {
public:
    TcpStream() = default;
    explicit TcpStream(int fd) : fd_(fd) {}
    TcpStream(TcpStream&& other) noexcept;
    TcpStream& operator=(TcpStream&& other) noexcept;
    TcpStream(const TcpStream&) = delete;
    TcpStream& operator=(const TcpStream&) = delete;
    ~TcpStream();

    static TcpStream connect(const std::string& host, std::uint16_t port);

    bool valid() const { return fd_ >= 0; }
    void close();

    // Writes `line` plus a trailing newline. Throws WireError on failure.
    void write_line(std::string_view line);

    // Reads one line, waiting up to `deadline_ms` (forever if negative).
    // Returns nullopt on deadline expiry; throws WireError on EOF/error.
    std::optional<std::string> read_line(int deadline_ms);

private:
    int fd_ = -1;
    std::string buf_;
};

// Parses "host:port" (host defaults to 127.0.0.1 when omitted).
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint);

class TcpListener {
public:
    // Binds and listens; port 0 picks an ephemeral port.
    TcpListener(const std::string& host, std::uint16_t port);
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::uint16_t port() const { return port_; }

    // Accepts one connection, waiting up to deadline_ms (forever if negative).
    std::optional<TcpStream> accept(int deadline_ms = -1);

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

// One-connection-at-a-time line server for tests and the stub tools: accepts
// connections in a background thread and feeds each request line to the
// handler, writing back every line the handler returns. A nullopt reply
// closes the connection.
class LineServer {
public:
    using Handler = std::function<std::optional<std::string>(const std::string&)>;

    LineServer(const std::string& host, std::uint16_t port, Handler handler);
    ~LineServer();

    std::uint16_t port() const { return listener_.port(); }
    void stop();

private:
    void run();

    TcpListener listener_;
    Handler handler_;
    std::atomic<bool> stop_{false};
    std::thread thread_;
};

}  // namespace duplex
