#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <string>

#include "cps/protocol.hpp"

namespace cps::protocol {

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Responder side of one request/reply exchange. Every protocol here is
// strictly ping-pong, so this is the whole server-side surface.
class Handler {
  public:
    virtual ~Handler() = default;
    virtual Message handle(const Message& m) = 0;
};

// Initiator side: send one message, block for the one reply.
class Endpoint {
  public:
    virtual ~Endpoint() = default;
    virtual Message exchange(const Message& m) = 0;
};

// Default in-process transport: a direct call into the handler.
class LoopbackEndpoint final : public Endpoint {
  public:
    explicit LoopbackEndpoint(Handler& h) : h_(h) {}
    Message exchange(const Message& m) override { return h_.handle(m); }

  private:
    Handler& h_;
};

// TCP client endpoint; "host:port" addressing, length-prefixed frames on a
// byte stream, one reply frame per request frame.
std::unique_ptr<Endpoint> tcp_endpoint(const std::string& host_port);

// Blocking accept loop serving framed exchanges; one connection at a time.
// stop() may be called from another thread; run() returns soon after.
class TcpServer {
  public:
    // host_port with port 0 binds an ephemeral port (see port()).
    TcpServer(const std::string& host_port, Handler& h);
    ~TcpServer();
    TcpServer(const TcpServer&) = delete;
    TcpServer& operator=(const TcpServer&) = delete;

    uint16_t port() const { return port_; }
    void run();
    void stop();

  private:
    void serve_connection(int fd);

    Handler& h_;
    int listen_fd_ = -1;
    uint16_t port_ = 0;
    std::atomic<bool> stop_{false};
};

}  // namespace cps::protocol
