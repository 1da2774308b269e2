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

#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "privnav/crypto/prng.hpp"
#include "privnav/protocol/frame.hpp"
#include "privnav/protocol/round.hpp"

namespace privnav::service {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
};

// "host:port", "[v6]:port" or ":port". Throws InputError.
Endpoint parse_endpoint(const std::string& s);

// One client connection; each exchange writes a frame and blocks for the reply.
class TcpTransport : public protocol::Transport {
 public:
  // Throws TransportError when the server is unreachable.
  static std::unique_ptr<TcpTransport> connect(const Endpoint& ep, int timeout_ms = 600000);
  ~TcpTransport() override;
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  protocol::Frame exchange(const protocol::Frame& request) override;
  void close();

 private:
  explicit TcpTransport(int fd) : fd_(fd) {}
  int fd_ = -1;
};

struct TcpServerConfig {
  Endpoint bind;
  std::size_t max_sessions = 64;
  int idle_timeout_ms = 600000;  // a session silent this long is dropped
};

// Accepts concurrent sessions, one thread and one ServerSession each. Only
// the ServerData is shared.
class TcpServer {
 public:
  TcpServer(std::shared_ptr<const protocol::ServerData> data, TcpServerConfig config, crypto::Prng rng);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  // Binds and starts accepting. Throws TransportError.
  void start();
  std::uint16_t port() const { return port_; }
  // Stops accepting, lets each session finish its current round, then joins.
  void stop();

  std::uint64_t sessions_started() const { return started_; }
  std::uint64_t sessions_completed() const { return completed_; }
  std::uint64_t sessions_failed() const { return failed_; }

 private:
  struct Connection {
    std::thread thread;
    std::atomic<bool> finished{false};
  };

  void accept_loop();
  void serve(int fd, Connection& self, crypto::Prng rng);
  void reap(bool all);

  std::shared_ptr<const protocol::ServerData> data_;
  TcpServerConfig config_;
  crypto::Prng rng_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex mu_;
  std::list<Connection> connections_;
  std::atomic<std::uint64_t> started_{0}, completed_{0}, failed_{0};
};

}  // namespace privnav::service
