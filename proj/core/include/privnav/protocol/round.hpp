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

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "privnav/common/bytes.hpp"
#include "privnav/crypto/prng.hpp"
#include "privnav/field/field.hpp"
#include "privnav/gc/circuit.hpp"
#include "privnav/gc/garble.hpp"
#include "privnav/protocol/params.hpp"
#include "privnav/protocol/records.hpp"
#include "privnav/roadgraph/roadgraph.hpp"
#include "privnav/signfactor/signfactor.hpp"

namespace privnav::protocol {

struct ServerConfig {
  field::Elem p = field::kDefaultPrime;
  bool allow_toy_field = false;
  unsigned pir_threads = 1;
  Delivery delivery = Delivery::kOffline;
  std::uint32_t rounds = 0;  // 0 derives R from the longest next-hop walk
  unsigned min_paillier_bits = 512;
};

// Read-only state shared by every session of one server.
struct ServerData {
  ProtocolParams params;
  ServerConfig config;
  field::Field f;
  std::vector<std::vector<field::Elem>> a_ne, b_ne, a_nw, b_nw;  // n x d, reduced
  gc::BooleanCircuit circuit;
  RecordShape shape;
};

// Verifies the matrices by exact arithmetic, checks them against the
// oriented graph and derives R. Throws InputError.
std::shared_ptr<const ServerData> make_server_data(const roadgraph::RoadGraph& g,
                                                   const signfactor::CompressedRouting& c,
                                                   const ServerConfig& config);

RecordShape record_shape(const ProtocolParams& p);

// Server inputs to the neighbor circuit, in circuit order.
inline constexpr std::array<const char*, 8> kServerGroups = {"gamma_ne", "delta_ne", "gamma_nw", "delta_nw",
                                                             "k_ne0",    "k_ne1",    "k_nw0",    "k_nw1"};

// Fresh secrets and sealed databases for one round.
struct RoundMaterial {
  std::uint32_t round = 0;
  field::BlindingSet ne, nw;
  field::AffineRandomness r_ne, r_nw;
  std::array<Key128, 4> prf_keys{};  // k_NE^0, k_NE^1, k_NW^0, k_NW^1
  DirectionKeys dir_keys{};
  gc::GarbledCircuit garbled;
  gc::Keyset keys;
  std::vector<Bytes> src, dst;  // sealed, uniform length
};

// src_keys open this round's source records, next_keys are embedded for
// the following round, dst_keys never rotate.
RoundMaterial build_round(const ServerData& data, const Key128& session, std::uint32_t round,
                          const std::vector<Key128>& src_keys, const std::vector<Key128>& next_keys,
                          const std::vector<Key128>& dst_keys, gc::GarbledCircuit garbled, gc::Keyset keys,
                          crypto::Prng& rng);

std::vector<gc::Label> server_input_labels(const ServerData& data, const RoundMaterial& m);
// Label pairs for the client's z bits: z_ne then z_nw, LSB first.
std::vector<std::array<gc::Label, 2>> z_label_pairs(const ServerData& data, const gc::Keyset& keys);

// Client view of one round after both retrievals.
struct OpenedRound {
  bool src_ok = false, dst_ok = false;
  field::Elem z_ne = 0, z_nw = 0;
  std::vector<gc::Label> s_labels, t_labels;
  std::array<Bytes, 4> kappa;
};

// Decrypts and evaluates the affine encodings. On any failure the z values
// and labels are random, so the round proceeds and yields bottom.
OpenedRound open_round(const ProtocolParams& params, const Key128& session, std::uint32_t round, std::uint32_t s,
                       std::uint32_t t, const Key128& k_src, const Key128& k_dst, ByteView src_sealed,
                       ByteView dst_sealed, crypto::Prng& rng);

std::vector<std::uint8_t> z_choice_bits(const ProtocolParams& params, field::Elem z_ne, field::Elem z_nw);

// Full input encoding from the three label sources.
std::vector<gc::Label> assemble_labels(const gc::BooleanCircuit& c, const std::vector<gc::Label>& z_labels,
                                       const std::vector<gc::Label>& server_labels, const OpenedRound& opened);

struct RoundOutcome {
  std::optional<std::uint32_t> hop;  // nullopt is bottom
  bool circuit_valid = false;        // the circuit output was not bottom
  std::optional<roadgraph::Direction> dir;
  Key128 next_key{};                 // random after a failure
};

// Evaluates the circuit and follows the selected direction key.
RoundOutcome finish_round(const ProtocolParams& params, const gc::BooleanCircuit& c,
                          const gc::GarbledCircuit* garbled, const std::vector<gc::Label>& labels,
                          const Key128& session, std::uint32_t round, std::uint32_t s, const OpenedRound& opened,
                          crypto::Prng& rng);

}  // namespace privnav::protocol
