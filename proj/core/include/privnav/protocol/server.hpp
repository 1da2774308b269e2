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

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "privnav/crypto/prng.hpp"
#include "privnav/pir/paillier.hpp"
#include "privnav/pir/pir.hpp"
#include "privnav/protocol/frame.hpp"
#include "privnav/protocol/round.hpp"

namespace privnav::protocol {

struct ServerPhaseTimes {
  double prep = 0;  // key generation, record sealing
  double gc = 0;    // garbling and circuit material
  double pir = 0;   // database packing and homomorphic folding
  double ot = 0;
};

// One client's session. Strictly sequential: every request frame yields
// exactly one response frame. Protocol violations produce an ERROR frame
// and end the session.
class ServerSession {
 public:
  ServerSession(std::shared_ptr<const ServerData> data, crypto::Prng rng);

  Frame handle(const Frame& request);

  bool done() const { return state_ == State::kDone; }
  bool failed() const { return state_ == State::kFailed; }
  // Between rounds (or not yet started): closing now cuts no round short.
  bool idle() const {
    return state_ == State::kHello || state_ == State::kPirSrc || state_ == State::kDone || state_ == State::kFailed;
  }
  const ProtocolParams& params() const { return data_->params; }
  const Key128& session_id() const { return session_; }
  // Rounds whose garbled-circuit material has been sent.
  std::uint32_t completed_rounds() const { return completed_; }

  // Introspection for tests and harnesses.
  const RoundMaterial& prepare_round(std::uint32_t r);
  const std::vector<Key128>& source_keys(std::uint32_t r);
  const std::vector<Key128>& dest_keys() const { return dst_keys_; }
  const ServerPhaseTimes& times() const { return times_; }
  // Tag and payload size of every request received.
  const std::vector<std::pair<Tag, std::size_t>>& received() const { return received_; }

 private:
  enum class State { kHello, kSetupOt, kOfflineCircuits, kPirSrc, kPirDst, kOt2, kGc, kDone, kFailed };

  Frame dispatch(const Frame& request);
  Frame on_hello(ByteView payload);
  Frame on_setup_ot(ByteView payload);
  Frame on_offline_circuits(ByteView payload);
  Frame on_pir(ByteView payload, bool source);
  Frame on_ot2(ByteView payload);
  Frame on_gc(ByteView payload);
  std::uint32_t expect_round(ByteReader& r) const;
  std::pair<gc::GarbledCircuit, gc::Keyset> circuit_for(std::uint32_t r);

  std::shared_ptr<const ServerData> data_;
  crypto::Prng rng_;
  Key128 session_{};
  State state_ = State::kHello;
  std::uint32_t round_ = 1;
  std::uint32_t completed_ = 0;
  std::optional<pir::PaillierPublicKey> client_pk_;
  std::map<std::uint32_t, std::vector<Key128>> src_keys_;
  std::vector<Key128> dst_keys_;
  std::map<std::uint32_t, RoundMaterial> rounds_;
  std::map<std::uint32_t, std::pair<gc::GarbledCircuit, gc::Keyset>> pregarbled_;
  std::optional<pir::PirDatabase> src_db_, dst_db_;
  std::uint32_t db_round_ = 0;
  ServerPhaseTimes times_;
  std::vector<std::pair<Tag, std::size_t>> received_;
};

// Client hello: u32 version, u32 modulus bits, modulus at fixed width.
Bytes encode_hello(const pir::PaillierPublicKey& pk);
// Server reply: u32 version, session id, public parameters.
Bytes encode_session_params(const Key128& session, const ProtocolParams& p);

pir::PirGeometry source_geometry(const ProtocolParams& p, unsigned modulus_bits);
pir::PirGeometry dest_geometry(const ProtocolParams& p, unsigned modulus_bits);

}  // namespace privnav::protocol
