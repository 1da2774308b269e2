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

#include "privnav/ot/ot.hpp"

#include "privnav/common/error.hpp"
#include "privnav/crypto/aead.hpp"
#include "privnav/crypto/hash.hpp"

namespace privnav::ot {
namespace {

constexpr std::string_view kChallengeDomain = "privnav/ot/v1/challenge";
constexpr std::string_view kKeyDomain = "privnav/ot/v1/record-key";

crypto::Nonce record_nonce(const OtContext& ctx, std::size_t i, std::uint32_t j) {
  return {ctx.round, static_cast<std::uint32_t>(i), j};
}

void write_point(ByteWriter& w, const Point& p) { w.raw(p.data(), p.size()); }

Point read_point(ByteReader& r) {
  Point p;
  r.raw(p.data(), p.size());
  return p;
}

}  // namespace

Scalar request_challenge(const OtContext& ctx, const OtRequest& req) {
  crypto::Sha256 h;
  h.update_field(as_bytes(kChallengeDomain));
  h.update_field(ctx.session).update_u32(ctx.round);
  h.update_u32(req.n).update_u32(static_cast<std::uint32_t>(req.count()));
  h.update(req.x).update(req.proof.commitment);
  for (std::size_t i = 0; i < req.count(); ++i) h.update(req.y[i]).update(req.z[i]);
  auto d = h.finish();
  return hash_to_scalar(kChallengeDomain, d);
}

Key128 record_key(const OtContext& ctx, std::size_t i, std::uint32_t j, const Point& element) {
  crypto::Sha256 h;
  h.update_field(as_bytes(kKeyDomain)).update_field(ctx.session).update_u32(ctx.round);
  h.update_u32(static_cast<std::uint32_t>(i)).update_u32(j).update(element);
  auto d = h.finish();
  Key128 k;
  std::copy_n(d.begin(), k.size(), k.begin());
  return k;
}

std::pair<OtRequest, OtReceiverSecret> ot_receiver_request(const OtContext& ctx,
                                                           const std::vector<std::uint32_t>& choices,
                                                           std::uint32_t n, crypto::Prng& rng) {
  if (n == 0) throw InputError("oblivious transfer needs at least one record");
  OtRequest req;
  OtReceiverSecret sec;
  sec.ctx = ctx;
  sec.n = req.n = n;
  sec.choices = choices;
  sec.a = random_scalar(rng);
  req.x = base_mul(sec.a);
  for (std::uint32_t c : choices) {
    if (c >= n) throw InputError("oblivious transfer choice out of range");
    Scalar b = random_scalar(rng);
    req.y.push_back(base_mul(b));
    req.z.push_back(base_mul(scalar_sub(scalar_mul(sec.a, b), scalar_from_u64(c))));
    sec.b.push_back(b);
  }
  Scalar k = random_scalar(rng);
  req.proof.commitment = base_mul(k);
  Scalar c = request_challenge(ctx, req);
  req.proof.response = scalar_add(k, scalar_mul(c, sec.a));
  return {std::move(req), std::move(sec)};
}

bool verify_request(const OtContext& ctx, const OtRequest& req) {
  if (req.n == 0 || req.y.size() != req.z.size()) return false;
  if (req.x == identity() || !is_valid(req.x) || !is_valid(req.proof.commitment)) return false;
  for (std::size_t i = 0; i < req.count(); ++i)
    if (!is_valid(req.y[i]) || !is_valid(req.z[i])) return false;
  Scalar c = request_challenge(ctx, req);
  // g^s = R x^c
  return base_mul(req.proof.response) == add(req.proof.commitment, mul(req.x, c));
}

OtResponse ot_sender_respond(const OtContext& ctx, const std::vector<std::vector<Bytes>>& records,
                             const OtRequest& req, crypto::Prng& rng) {
  if (!verify_request(ctx, req)) throw ProtocolError("oblivious transfer request failed verification");
  if (records.size() != req.count()) throw ProtocolError("oblivious transfer batch size mismatch");
  for (const auto& set : records) {
    if (set.size() != req.n) throw ProtocolError("oblivious transfer record count mismatch");
    for (const auto& r : set)
      if (r.size() != set[0].size()) throw InputError("oblivious transfer records must have equal length");
  }
  Scalar u = random_scalar(rng), v = random_scalar(rng);
  OtResponse resp;
  resp.w = add(mul(req.x, u), base_mul(v));
  const Point gu = base_mul(u);
  resp.sealed.resize(req.count());
  for (std::size_t i = 0; i < req.count(); ++i) {
    // (z_i g^j)^u y_i^v, stepping j by multiplying with g^u.
    Point key = add(mul(req.z[i], u), mul(req.y[i], v));
    auto& out = resp.sealed[i];
    out.reserve(req.n);
    for (std::uint32_t j = 0; j < req.n; ++j) {
      if (j > 0) key = add(key, gu);
      out.push_back(crypto::seal(record_key(ctx, i, j, key), record_nonce(ctx, i, j), {}, records[i][j]));
    }
  }
  return resp;
}

std::optional<Bytes> ot_receiver_try(const OtResponse& resp, const OtReceiverSecret& sec, std::size_t i,
                                     std::uint32_t j) {
  if (i >= resp.sealed.size() || i >= sec.b.size() || j >= resp.sealed[i].size()) return std::nullopt;
  if (!is_valid(resp.w)) return std::nullopt;
  Point key = mul(resp.w, sec.b[i]);
  return crypto::open(record_key(sec.ctx, i, j, key), record_nonce(sec.ctx, i, j), {}, resp.sealed[i][j]);
}

std::vector<Bytes> ot_receiver_finish(const OtResponse& resp, const OtReceiverSecret& sec) {
  if (resp.sealed.size() != sec.choices.size()) throw DecodeError("oblivious transfer response size mismatch");
  std::vector<Bytes> out;
  out.reserve(sec.choices.size());
  for (std::size_t i = 0; i < sec.choices.size(); ++i) {
    if (resp.sealed[i].size() != sec.n) throw DecodeError("oblivious transfer response size mismatch");
    auto rec = ot_receiver_try(resp, sec, i, sec.choices[i]);
    if (!rec) throw DecodeError("oblivious transfer record failed authentication");
    out.push_back(std::move(*rec));
  }
  return out;
}

std::pair<OtRequest, OtReceiverSecret> ot2_request(const OtContext& ctx, const std::vector<std::uint8_t>& bits,
                                                   crypto::Prng& rng) {
  std::vector<std::uint32_t> choices(bits.begin(), bits.end());
  return ot_receiver_request(ctx, choices, 2, rng);
}

OtResponse ot2_respond(const OtContext& ctx, const std::vector<LabelPair>& pairs, const OtRequest& req,
                       crypto::Prng& rng) {
  if (req.n != 2) throw ProtocolError("expected a one-out-of-two request");
  std::vector<std::vector<Bytes>> records;
  records.reserve(pairs.size());
  for (const auto& p : pairs) records.push_back({p[0], p[1]});
  return ot_sender_respond(ctx, records, req, rng);
}

std::vector<Bytes> ot2_finish(const OtResponse& resp, const OtReceiverSecret& sec) {
  return ot_receiver_finish(resp, sec);
}

Bytes encode_request(const OtRequest& r) {
  ByteWriter w;
  w.u32(r.n);
  write_point(w, r.x);
  write_point(w, r.proof.commitment);
  w.raw(r.proof.response.data(), r.proof.response.size());
  w.u32(static_cast<std::uint32_t>(r.count()));
  for (std::size_t i = 0; i < r.count(); ++i) {
    write_point(w, r.y[i]);
    write_point(w, r.z[i]);
  }
  return w.take();
}

OtRequest decode_request(ByteView b) {
  ByteReader r(b);
  OtRequest q;
  q.n = r.u32();
  q.x = read_point(r);
  q.proof.commitment = read_point(r);
  r.raw(q.proof.response.data(), q.proof.response.size());
  std::uint32_t count = r.u32();
  if (count > r.remaining() / (2 * kPointBytes)) throw DecodeError("oblivious transfer request truncated");
  q.y.resize(count);
  q.z.resize(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    q.y[i] = read_point(r);
    q.z[i] = read_point(r);
  }
  r.expect_end();
  return q;
}

Bytes encode_response(const OtResponse& resp) {
  ByteWriter w;
  write_point(w, resp.w);
  w.u32(static_cast<std::uint32_t>(resp.sealed.size()));
  w.u32(resp.sealed.empty() ? 0 : static_cast<std::uint32_t>(resp.sealed[0].size()));
  for (const auto& set : resp.sealed) {
    if (set.size() != resp.sealed[0].size()) throw InputError("ragged oblivious transfer response");
    for (const auto& s : set) w.blob(s);
  }
  return w.take();
}

OtResponse decode_response(ByteView b) {
  ByteReader r(b);
  OtResponse resp;
  resp.w = read_point(r);
  std::uint32_t count = r.u32(), n = r.u32();
  if (std::uint64_t{count} * n > r.remaining() / 4) throw DecodeError("oblivious transfer response truncated");
  resp.sealed.resize(count);
  for (auto& set : resp.sealed) {
    set.reserve(n);
    for (std::uint32_t j = 0; j < n; ++j) {
      ByteView s = r.blob();
      set.emplace_back(s.begin(), s.end());
    }
  }
  r.expect_end();
  return resp;
}

}  // namespace privnav::ot
