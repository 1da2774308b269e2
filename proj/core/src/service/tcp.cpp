// Copyright 2026 The privnav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "privnav/service/tcp.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "privnav/common/error.hpp"
#include "privnav/protocol/server.hpp"
#include "privnav/service/wire.hpp"

namespace privnav::service {
namespace {

using protocol::Frame;

constexpr int kPollSliceMs = 100;

std::string sys_error(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

// Waits until fd is readable. False on timeout or when give_up() says so
// between slices.
template <class GiveUp>
bool wait_readable(int fd, int timeout_ms, GiveUp give_up) {
  int waited = 0;
  while (true) {
    pollfd p{fd, POLLIN, 0};
    int slice = timeout_ms < 0 ? kPollSliceMs : std::min(kPollSliceMs, timeout_ms - waited);
    int rc = ::poll(&p, 1, slice);
    if (rc > 0) return true;
    if (rc < 0 && errno != EINTR) throw TransportError(sys_error("poll"));
    waited += slice;
    if (give_up() || (timeout_ms >= 0 && waited >= timeout_ms)) return false;
  }
}

void write_all(int fd, const std::uint8_t* p, std::size_t n) {
  while (n > 0) {
    ssize_t k = ::send(fd, p, n, MSG_NOSIGNAL);
    if (k < 0) {
      if (errno == EINTR) continue;
      throw TransportError(sys_error("send"));
    }
    p += k;
    n -= static_cast<std::size_t>(k);
  }
}

// False on a clean EOF before the first byte.
bool read_all(int fd, std::uint8_t* p, std::size_t n, int timeout_ms) {
  std::size_t got = 0;
  while (got < n) {
    if (!wait_readable(fd, timeout_ms, [] { return false; })) throw TransportError("timed out waiting for peer");
    ssize_t k = ::recv(fd, p + got, n - got, 0);
    if (k < 0) {
      if (errno == EINTR) continue;
      throw TransportError(sys_error("recv"));
    }
    if (k == 0) {
      if (got == 0) return false;
      throw TransportError("connection closed mid-frame");
    }
    got += static_cast<std::size_t>(k);
  }
  return true;
}

void send_frame(int fd, const Frame& f) {
  Bytes b = encode_frame(f);
  write_all(fd, b.data(), b.size());
}

// Throws DecodeError for a bad header, TransportError for socket trouble.
std::optional<Frame> recv_frame(int fd, int timeout_ms) {
  std::uint8_t header[kFrameHeaderBytes];
  if (!read_all(fd, header, sizeof(header), timeout_ms)) return std::nullopt;
  FrameHeader h = parse_header(header);
  Frame f;
  f.tag = static_cast<protocol::Tag>(h.tag);
  f.payload.resize(h.length);
  if (h.length > 0 && !read_all(fd, f.payload.data(), h.length, timeout_ms))
    throw TransportError("connection closed mid-frame");
  return f;
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

addrinfo* resolve(const Endpoint& ep, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  std::string port = std::to_string(ep.port);
  int rc = ::getaddrinfo(ep.host.empty() ? nullptr : ep.host.c_str(), port.c_str(), &hints, &res);
  if (rc != 0) throw TransportError("cannot resolve " + ep.host + ": " + ::gai_strerror(rc));
  return res;
}

}  // namespace

Endpoint parse_endpoint(const std::string& s) {
  auto colon = s.rfind(':');
  if (colon == std::string::npos) throw InputError("address must be host:port, got '" + s + "'");
  Endpoint ep;
  ep.host = s.substr(0, colon);
  if (ep.host.size() >= 2 && ep.host.front() == '[' && ep.host.back() == ']') ep.host = ep.host.substr(1, ep.host.size() - 2);
  if (ep.host.empty()) ep.host = "0.0.0.0";
  std::string port = s.substr(colon + 1);
  char* end = nullptr;
  unsigned long v = std::strtoul(port.c_str(), &end, 10);
  if (port.empty() || *end != '\0' || v > 65535) throw InputError("bad port in '" + s + "'");
  ep.port = static_cast<std::uint16_t>(v);
  return ep;
}

std::unique_ptr<TcpTransport> TcpTransport::connect(const Endpoint& ep, int timeout_ms) {
  addrinfo* res = resolve(ep, false);
  int fd = -1;
  std::string last = "no addresses";
  for (addrinfo* a = res; a != nullptr; a = a->ai_next) {
    fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) break;
    last = std::strerror(errno);
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw TransportError("cannot connect to " + ep.host + ":" + std::to_string(ep.port) + ": " + last);
  set_nodelay(fd);
  auto t = std::unique_ptr<TcpTransport>(new TcpTransport(fd));
  timeval tv{timeout_ms / 1000, (timeout_ms % 1000) * 1000};
  ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
  return t;
}

TcpTransport::~TcpTransport() { close(); }

void TcpTransport::close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

Frame TcpTransport::exchange(const Frame& request) {
  if (fd_ < 0) throw TransportError("connection is closed");
  send_frame(fd_, request);
  std::optional<Frame> f;
  try {
    f = recv_frame(fd_, -1);
  } catch (const DecodeError& e) {
    throw TransportError(std::string("bad frame from server: ") + e.what());
  }
  if (!f) throw TransportError("server closed the connection");
  return *f;
}

TcpServer::TcpServer(std::shared_ptr<const protocol::ServerData> data, TcpServerConfig config, crypto::Prng rng)
    : data_(std::move(data)), config_(std::move(config)), rng_(std::move(rng)) {}

TcpServer::~TcpServer() { stop(); }

void TcpServer::start() {
  addrinfo* res = resolve(config_.bind, true);
  std::string last = "no addresses";
  for (addrinfo* a = res; a != nullptr; a = a->ai_next) {
    int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd, a->ai_addr, a->ai_addrlen) == 0 && ::listen(fd, 16) == 0) {
      listen_fd_ = fd;
      break;
    }
    last = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (listen_fd_ < 0) throw TransportError("cannot listen on " + config_.bind.host + ":" +
                                           std::to_string(config_.bind.port) + ": " + last);
  sockaddr_storage addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.ss_family == AF_INET6 ? reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port
                                           : reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  acceptor_ = std::thread([this] { accept_loop(); });
}

void TcpServer::stop() {
  stopping_ = true;
  if (acceptor_.joinable()) acceptor_.join();
  reap(true);
  if (listen_fd_ >= 0) ::close(listen_fd_);
  listen_fd_ = -1;
}

void TcpServer::reap(bool all) {
  std::lock_guard<std::mutex> lock(mu_);
  for (auto it = connections_.begin(); it != connections_.end();) {
    if (all || it->finished) {
      if (it->thread.joinable()) it->thread.join();
      it = connections_.erase(it);
    } else {
      ++it;
    }
  }
}

void TcpServer::accept_loop() {
  while (!stopping_) {
    if (!wait_readable(listen_fd_, -1, [this] { return stopping_.load(); })) break;
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    set_nodelay(fd);
    reap(false);
    std::lock_guard<std::mutex> lock(mu_);
    if (connections_.size() >= config_.max_sessions) {
      try {
        send_frame(fd, Frame::error("server busy"));
      } catch (const TransportError&) {
      }
      ::close(fd);
      continue;
    }
    ++started_;
    Connection& c = connections_.emplace_back();
    c.thread = std::thread([this, fd, &c, rng = rng_.fork()]() mutable { serve(fd, c, std::move(rng)); });
  }
}

void TcpServer::serve(int fd, Connection& self, crypto::Prng rng) {
  protocol::ServerSession session(data_, std::move(rng));
  try {
    while (!session.done() && !session.failed()) {
      // Between rounds a stop request ends the session; mid-round we keep
      // serving until the round is complete.
      if (stopping_ && session.idle()) break;
      bool ready = wait_readable(fd, config_.idle_timeout_ms, [&] { return stopping_ && session.idle(); });
      if (!ready) break;
      std::optional<Frame> req;
      try {
        req = recv_frame(fd, config_.idle_timeout_ms);
      } catch (const DecodeError& e) {
        send_frame(fd, Frame::error(e.what()));
        break;
      }
      if (!req) break;
      send_frame(fd, session.handle(*req));
    }
  } catch (const TransportError&) {
  }
  if (session.done())
    ++completed_;
  else
    ++failed_;
  ::close(fd);
  self.finished = true;
}

}  // namespace privnav::service
