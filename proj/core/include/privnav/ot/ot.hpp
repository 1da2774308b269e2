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
#include <optional>
#include <vector>

#include "privnav/common/bytes.hpp"
#include "privnav/crypto/prng.hpp"
#include "privnav/ot/group.hpp"

namespace privnav::ot {

// Binds every message and derived key to one session and round.
struct OtContext {
  Key128 session{};
  std::uint32_t round = 0;
};

// Non-interactive proof of knowledge of log_g(x).
struct SchnorrProof {
  Point commitment{};
  Scalar response{};
};

// A batch of 1-out-of-n transfers sharing the receiver element x = g^a.
// Transfer i carries y_i = g^(b_i) and z_i = g^(a b_i - choice_i).
struct OtRequest {
  std::uint32_t n = 0;
  Point x{};
  SchnorrProof proof;
  std::vector<Point> y, z;
  std::size_t count() const { return y.size(); }
};

struct OtReceiverSecret {
  OtContext ctx;
  std::uint32_t n = 0;
  Scalar a{};
  std::vector<Scalar> b;
  std::vector<std::uint32_t> choices;
};

// w = x^u g^v, and per transfer the n sealed records.
struct OtResponse {
  Point w{};
  std::vector<std::vector<Bytes>> sealed;
};

// Throws InputError when a choice is >= n or n == 0.
std::pair<OtRequest, OtReceiverSecret> ot_receiver_request(const OtContext& ctx,
                                                           const std::vector<std::uint32_t>& choices,
                                                           std::uint32_t n, crypto::Prng& rng);

// Checks the proof before anything else; throws ProtocolError when it
// fails, when an element is not canonical, or when the batch shape does not
// match. records[i] holds the n equal-length records of transfer i.
OtResponse ot_sender_respond(const OtContext& ctx, const std::vector<std::vector<Bytes>>& records,
                             const OtRequest& request, crypto::Prng& rng);

// Throws DecodeError when a chosen record fails authentication or the
// response shape does not fit the secret.
std::vector<Bytes> ot_receiver_finish(const OtResponse& response, const OtReceiverSecret& secret);

// Attempts record j of transfer i with the receiver's key; nullopt unless
// j is the chosen index.
std::optional<Bytes> ot_receiver_try(const OtResponse& response, const OtReceiverSecret& secret, std::size_t i,
                                     std::uint32_t j);

bool verify_request(const OtContext& ctx, const OtRequest& request);

// Fiat-Shamir challenge: SHA-256 over the domain tag, session, round and
// every request element before the response.
Scalar request_challenge(const OtContext& ctx, const OtRequest& request);

Key128 record_key(const OtContext& ctx, std::size_t i, std::uint32_t j, const Point& element);

// One-out-of-two wrappers over the same protocol.
using LabelPair = std::array<Bytes, 2>;
std::pair<OtRequest, OtReceiverSecret> ot2_request(const OtContext& ctx, const std::vector<std::uint8_t>& bits,
                                                   crypto::Prng& rng);
OtResponse ot2_respond(const OtContext& ctx, const std::vector<LabelPair>& pairs, const OtRequest& request,
                       crypto::Prng& rng);
std::vector<Bytes> ot2_finish(const OtResponse& response, const OtReceiverSecret& secret);

// n, x, proof, u32 count, then y_i z_i pairs; all points 32 bytes.
Bytes encode_request(const OtRequest& r);
OtRequest decode_request(ByteView b);
// w, u32 count, u32 n, then n length-prefixed sealed records per transfer.
Bytes encode_response(const OtResponse& r);
OtResponse decode_response(ByteView b);

}  // namespace privnav::ot
