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

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "privnav/crypto/hash.hpp"
#include "privnav/crypto/prng.hpp"
#include "privnav/pir/paillier.hpp"
#include "privnav/pir/pir.hpp"
#include "privnav/protocol/frame.hpp"
#include "privnav/protocol/round.hpp"

namespace privnav::protocol {

class ServerSession;

using Path = std::vector<std::optional<std::uint32_t>>;

// What a (possibly cheating) client saw in one round.
struct RoundView {
  std::uint32_t round = 0;
  std::uint32_t s = 0, t = 0;
  std::uint32_t src_index = 0, dst_index = 0;  // indices actually retrieved
  const Bytes* src_sealed = nullptr;
  const Bytes* dst_sealed = nullptr;
  Key128 src_key{}, dst_key{};
  const OpenedRound* opened = nullptr;
  const RoundOutcome* outcome = nullptr;
};

// Test hooks for scripted deviations; unset hooks mean honest behaviour.
struct ClientHooks {
  std::function<std::uint32_t(std::uint32_t round, std::uint32_t s)> src_index;
  std::function<std::uint32_t(std::uint32_t round, std::uint32_t t)> dst_index;
  std::function<void(std::uint32_t round, Key128& src_key)> src_key;
  std::function<void(std::uint32_t round, field::Elem& z_ne, field::Elem& z_nw)> z;
  std::function<void(const RoundView&)> on_round;
};

struct ClientConfig {
  std::uint32_t s = 0, t = 0;
  unsigned paillier_bits = 1024;
  bool allow_toy_field = false;
  ClientHooks hooks;
};

struct ClientRoundStats {
  double total = 0, pir = 0, ot = 0, gc = 0;
};

struct ClientStats {
  double keygen = 0;
  double setup = 0;
  std::vector<ClientRoundStats> rounds;
};

class ClientSession {
 public:
  ClientSession(ClientConfig config, crypto::Prng rng);

  // Reuses a Paillier key instead of generating one in setup.
  void use_paillier_keys(std::shared_ptr<const pir::PaillierKeypair> keys);

  // Throws ProtocolError on an ERROR reply, a failed setup transfer or bad
  // parameters, InputError when s or t is not a node.
  void setup(Transport& t);
  // Never aborts on malformed round material: it yields bottom instead.
  std::optional<std::uint32_t> run_round(Transport& t);
  // setup() followed by exactly R rounds.
  Path run(Transport& t);

  const ProtocolParams& params() const { return params_; }
  const Key128& session_id() const { return session_; }
  std::uint32_t current() const { return s_; }
  std::uint32_t rounds_done() const { return round_; }
  const Path& path() const { return path_; }
  const ClientStats& stats() const { return stats_; }
  unsigned paillier_bits() const { return keys_ ? keys_->pk.bits : 0; }
  const Key128& source_key() const { return k_src_; }
  const Key128& dest_key() const { return k_dst_; }

 private:
  Frame exchange(Transport& t, Tag tag, Bytes payload, Tag expect);

  ClientConfig cfg_;
  crypto::Prng rng_;
  std::shared_ptr<const pir::PaillierKeypair> keys_;
  ProtocolParams params_;
  Key128 session_{};
  gc::BooleanCircuit circuit_;
  std::vector<std::optional<gc::GarbledCircuit>> offline_;  // index r - 1
  std::vector<crypto::Digest> offline_digest_;
  std::optional<pir::PirGeometry> src_geom_, dst_geom_;
  std::uint32_t s_ = 0;
  std::uint32_t round_ = 0;
  Key128 k_src_{}, k_dst_{};
  bool ready_ = false;
  Path path_;
  ClientStats stats_;
};

// Hands frames straight to an in-process server session.
class DirectTransport : public Transport {
 public:
  explicit DirectTransport(ServerSession& server) : server_(server) {}
  Frame exchange(const Frame& request) override;

 private:
  ServerSession& server_;
};

// Ideal functionality: the next-hop walk from s to t, bottom-padded to R
// entries (all bottom when s = t).
Path ideal_path(const roadgraph::RoadGraph& g, const roadgraph::NextHopMatrices& m, std::uint32_t s,
                std::uint32_t t, std::uint32_t rounds);

}  // namespace privnav::protocol
