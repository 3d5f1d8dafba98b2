#include "cps/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

namespace cps::protocol {

namespace {

constexpr size_t kMaxFrame = 1 << 24;
// fixed header: session_id(16) + step(1) + length(4)
constexpr size_t kHeaderBytes = 21;

std::pair<std::string, uint16_t> parse_host_port(const std::string& s) {
    auto colon = s.rfind(':');
    if (colon == std::string::npos || colon + 1 >= s.size())
        throw TransportError("address must be host:port, got '" + s + "'");
    unsigned long port = std::stoul(s.substr(colon + 1));
    if (port > 65535) throw TransportError("port out of range");
    return {s.substr(0, colon), uint16_t(port)};
}

void write_all(int fd, const uint8_t* data, size_t n) {
    size_t off = 0;
    while (off < n) {
        ssize_t w = ::write(fd, data + off, n - off);
        if (w < 0) {
            if (errno == EINTR) continue;
            throw TransportError(std::string("write failed: ") + std::strerror(errno));
        }
        off += size_t(w);
    }
}

bool read_all(int fd, uint8_t* data, size_t n) {
    size_t off = 0;
    while (off < n) {
        ssize_t r = ::read(fd, data + off, n - off);
        if (r < 0) {
            if (errno == EINTR) continue;
            throw TransportError(std::string("read failed: ") + std::strerror(errno));
        }
        if (r == 0) {
            if (off == 0) return false;  // clean close between frames
            throw TransportError("connection closed mid-frame");
        }
        off += size_t(r);
    }
    return true;
}

// Reads one framed message; false on clean end-of-stream.
bool read_frame(int fd, Message& out) {
    uint8_t header[kHeaderBytes];
    if (!read_all(fd, header, sizeof header)) return false;
    uint32_t len = (uint32_t(header[17]) << 24) | (uint32_t(header[18]) << 16) |
                   (uint32_t(header[19]) << 8) | uint32_t(header[20]);
    if (len > kMaxFrame) throw TransportError("oversized frame");
    Bytes full(kHeaderBytes + len);
    std::memcpy(full.data(), header, kHeaderBytes);
    if (len && !read_all(fd, full.data() + kHeaderBytes, len))
        throw TransportError("connection closed mid-frame");
    try {
        out = unframe_bytes(full);
    } catch (const CodecError& e) {
        throw TransportError(std::string("bad frame: ") + e.what());
    }
    return true;
}

struct Fd {
    int fd = -1;
    ~Fd() {
        if (fd >= 0) ::close(fd);
    }
};

class TcpEndpoint final : public Endpoint {
  public:
    explicit TcpEndpoint(const std::string& host_port) {
        auto [host, port] = parse_host_port(host_port);
        fd_.fd = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd_.fd < 0) throw TransportError("socket() failed");
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(port);
        if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
            throw TransportError("bad IPv4 address '" + host + "'");
        if (::connect(fd_.fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
            throw TransportError(std::string("connect failed: ") + std::strerror(errno));
        int one = 1;
        ::setsockopt(fd_.fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    }

    Message exchange(const Message& m) override {
        Bytes f = frame(m);
        write_all(fd_.fd, f.data(), f.size());
        Message reply;
        if (!read_frame(fd_.fd, reply)) throw TransportError("peer closed connection");
        return reply;
    }

  private:
    Fd fd_;
};

}  // namespace

std::unique_ptr<Endpoint> tcp_endpoint(const std::string& host_port) {
    return std::make_unique<TcpEndpoint>(host_port);
}

TcpServer::TcpServer(const std::string& host_port, Handler& h) : h_(h) {
    auto [host, port] = parse_host_port(host_port);
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw TransportError("socket() failed");
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw TransportError("bad IPv4 address '" + host + "'");
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
        ::listen(listen_fd_, 8) != 0) {
        auto err = std::string("bind/listen failed: ") + std::strerror(errno);
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw TransportError(err);
    }
    sockaddr_in bound{};
    socklen_t blen = sizeof bound;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &blen);
    port_ = ntohs(bound.sin_port);
}

TcpServer::~TcpServer() {
    stop();
    if (listen_fd_ >= 0) ::close(listen_fd_);
}

void TcpServer::stop() { stop_.store(true); }

void TcpServer::serve_connection(int fd) {
    Fd guard{fd};
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    Message m;
    while (!stop_.load()) {
        pollfd pfd{fd, POLLIN, 0};
        int pr = ::poll(&pfd, 1, 100);
        if (pr < 0 && errno != EINTR) return;
        if (pr <= 0) continue;
        if (!read_frame(fd, m)) return;  // client finished
        Message reply = h_.handle(m);
        Bytes f = frame(reply);
        write_all(fd, f.data(), f.size());
    }
}

void TcpServer::run() {
    while (!stop_.load()) {
        pollfd pfd{listen_fd_, POLLIN, 0};
        int pr = ::poll(&pfd, 1, 100);
        if (pr < 0 && errno != EINTR)
            throw TransportError(std::string("poll failed: ") + std::strerror(errno));
        if (pr <= 0) continue;
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) continue;
        try {
            serve_connection(fd);
        } catch (const TransportError&) {
            // connection-level failure; keep serving the next client
        }
    }
}

}  // namespace cps::protocol
