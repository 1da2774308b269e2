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

#include "privnav/protocol/server.hpp"

#include "privnav/common/error.hpp"
#include "privnav/crypto/hash.hpp"
#include "privnav/ot/ot.hpp"

namespace privnav::protocol {
namespace {

class Stopwatch {
 public:
  explicit Stopwatch(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() { sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  double& sink_;
  std::chrono::steady_clock::time_point start_;
};

Frame reply(Tag tag, Bytes payload) { return Frame{tag, std::move(payload)}; }

std::vector<Key128> fresh_keys(std::size_t n, crypto::Prng& rng) {
  std::vector<Key128> k(n);
  for (auto& x : k) x = rng.key();
  return k;
}

Bytes label_bytes(const gc::Label& l) {
  ByteWriter w;
  l.write(w);
  return w.take();
}

}  // namespace

Bytes encode_hello(const pir::PaillierPublicKey& pk) {
  ByteWriter w;
  w.u32(kProtocolVersion);
  w.u32(pk.bits);
  w.blob(pir::to_bytes(pk.n, (pk.bits + 7) / 8));
  return w.take();
}

Bytes encode_session_params(const Key128& session, const ProtocolParams& p) {
  ByteWriter w;
  w.u32(kProtocolVersion);
  w.raw(session);
  write_params(w, p);
  return w.take();
}

pir::PirGeometry source_geometry(const ProtocolParams& p, unsigned modulus_bits) {
  return pir::PirGeometry::make(p.n, static_cast<std::uint32_t>(record_shape(p).source_sealed()), modulus_bits);
}

pir::PirGeometry dest_geometry(const ProtocolParams& p, unsigned modulus_bits) {
  return pir::PirGeometry::make(p.n, static_cast<std::uint32_t>(record_shape(p).dest_sealed()), modulus_bits);
}

ServerSession::ServerSession(std::shared_ptr<const ServerData> data, crypto::Prng rng)
    : data_(std::move(data)), rng_(std::move(rng)) {
  Stopwatch sw(times_.prep);
  session_ = rng_.key();
  src_keys_[1] = fresh_keys(data_->params.n, rng_);
  dst_keys_ = fresh_keys(data_->params.n, rng_);
}

const std::vector<Key128>& ServerSession::source_keys(std::uint32_t r) {
  auto it = src_keys_.find(r);
  if (it != src_keys_.end()) return it->second;
  if (r == 0 || r > data_->params.rounds + 1) throw InputError("no source keys for round " + std::to_string(r));
  source_keys(r - 1);
  return src_keys_[r] = fresh_keys(data_->params.n, rng_);
}

std::pair<gc::GarbledCircuit, gc::Keyset> ServerSession::circuit_for(std::uint32_t r) {
  if (data_->params.delivery == Delivery::kOffline) {
    auto it = pregarbled_.find(r);
    if (it == pregarbled_.end()) throw ProtocolError("garbled circuit for round " + std::to_string(r) + " missing");
    auto out = std::move(it->second);
    pregarbled_.erase(it);
    return out;
  }
  Stopwatch sw(times_.gc);
  return gc::garble(data_->circuit, rng_);
}

const RoundMaterial& ServerSession::prepare_round(std::uint32_t r) {
  auto it = rounds_.find(r);
  if (it != rounds_.end()) return it->second;
  if (r == 0 || r > data_->params.rounds) throw InputError("round " + std::to_string(r) + " out of range");
  if (data_->params.delivery == Delivery::kOffline && pregarbled_.count(r) == 0)
    throw ProtocolError("round " + std::to_string(r) + " prepared before its circuit was shipped");
  auto [garbled, keys] = circuit_for(r);
  const auto& cur = source_keys(r);
  const auto& next = source_keys(r + 1);
  Stopwatch sw(times_.prep);
  auto [pos, inserted] = rounds_.emplace(
      r, build_round(*data_, session_, r, cur, next, dst_keys_, std::move(garbled), std::move(keys), rng_));
  // Keep the previous round for introspection, drop older ones.
  while (!rounds_.empty() && rounds_.begin()->first + 1 < r) rounds_.erase(rounds_.begin());
  return pos->second;
}

Frame ServerSession::handle(const Frame& request) {
  received_.emplace_back(request.tag, request.payload.size());
  if (state_ == State::kFailed) return Frame::error("session already failed");
  if (state_ == State::kDone) {
    state_ = State::kFailed;
    return Frame::error("session already complete");
  }
  try {
    return dispatch(request);
  } catch (const Error& e) {
    state_ = State::kFailed;
    return Frame::error(e.what());
  }
}

Frame ServerSession::dispatch(const Frame& req) {
  auto expect = [&](Tag t) {
    if (req.tag != t)
      throw ProtocolError(std::string("expected ") + tag_name(t) + ", got " +
                          (is_known_tag(static_cast<std::uint8_t>(req.tag)) ? tag_name(req.tag) : "unknown tag"));
  };
  switch (state_) {
    case State::kHello:
      expect(Tag::kSessionParams);
      return on_hello(req.payload);
    case State::kSetupOt:
      expect(Tag::kSetupOtReq);
      return on_setup_ot(req.payload);
    case State::kOfflineCircuits:
      expect(Tag::kGcMaterial);
      return on_offline_circuits(req.payload);
    case State::kPirSrc:
      expect(Tag::kPirSrcReq);
      return on_pir(req.payload, true);
    case State::kPirDst:
      expect(Tag::kPirDstReq);
      return on_pir(req.payload, false);
    case State::kOt2:
      expect(Tag::kOt2Req);
      return on_ot2(req.payload);
    case State::kGc:
      expect(Tag::kGcMaterial);
      return on_gc(req.payload);
    case State::kDone:
    case State::kFailed:
      break;
  }
  throw ProtocolError("session is closed");
}

Frame ServerSession::on_hello(ByteView payload) {
  ByteReader r(payload);
  std::uint32_t version = r.u32();
  if (version != kProtocolVersion)
    throw ProtocolError("protocol version mismatch: client " + std::to_string(version) + ", server " +
                        std::to_string(kProtocolVersion));
  pir::PaillierPublicKey pk;
  pk.bits = r.u32();
  pk.n = pir::from_bytes(r.blob());
  r.expect_end();
  if (pk.bits < data_->config.min_paillier_bits || pk.bits > 8192 ||
      mpz_sizeinbase(pk.n.get_mpz_t(), 2) != pk.bits || mpz_even_p(pk.n.get_mpz_t()))
    throw ProtocolError("unacceptable Paillier modulus");
  pk.n2 = pk.n * pk.n;
  client_pk_ = std::move(pk);
  state_ = State::kSetupOt;
  return reply(Tag::kSessionParams, encode_session_params(session_, data_->params));
}

Frame ServerSession::on_setup_ot(ByteView payload) {
  Stopwatch sw(times_.ot);
  ot::OtRequest req = ot::decode_request(payload);
  if (req.count() != 2 || req.n != data_->params.n) throw ProtocolError("setup transfer has the wrong shape");
  std::vector<std::vector<Bytes>> recs(2);
  for (const auto& k : source_keys(1)) recs[0].emplace_back(k.begin(), k.end());
  for (const auto& k : dst_keys_) recs[1].emplace_back(k.begin(), k.end());
  ot::OtResponse resp = ot::ot_sender_respond(ot::OtContext{session_, 0}, recs, req, rng_);
  state_ = data_->params.delivery == Delivery::kOffline ? State::kOfflineCircuits : State::kPirSrc;
  return reply(Tag::kSetupOtResp, ot::encode_response(resp));
}

Frame ServerSession::on_offline_circuits(ByteView payload) {
  ByteReader r(payload);
  if (r.u32() != 0) throw ProtocolError("offline circuit request must name round 0");
  r.expect_end();
  Stopwatch sw(times_.gc);
  ByteWriter w;
  w.u32(0);
  w.u32(data_->params.rounds);
  for (std::uint32_t k = 1; k <= data_->params.rounds; ++k) {
    auto gk = gc::garble(data_->circuit, rng_);
    w.blob(gc::serialize(data_->circuit, gk.first));
    pregarbled_.emplace(k, std::move(gk));
  }
  state_ = State::kPirSrc;
  return reply(Tag::kGcMaterial, w.take());
}

std::uint32_t ServerSession::expect_round(ByteReader& r) const {
  std::uint32_t got = r.u32();
  if (got != round_)
    throw ProtocolError("expected round " + std::to_string(round_) + ", got " + std::to_string(got));
  return got;
}

Frame ServerSession::on_pir(ByteView payload, bool source) {
  ByteReader r(payload);
  std::uint32_t rd = expect_round(r);
  const RoundMaterial& m = prepare_round(rd);
  Stopwatch sw(times_.pir);
  const unsigned bits = client_pk_->bits;
  if (db_round_ != rd) {
    src_db_.emplace(source_geometry(data_->params, bits), m.src);
    dst_db_.emplace(dest_geometry(data_->params, bits), m.dst);
    db_round_ = rd;
  }
  const pir::PirDatabase& db = source ? *src_db_ : *dst_db_;
  pir::PirQuery q = pir::decode_query(r.raw(r.remaining()), db.geometry());
  pir::PirResponse resp = pir::pir_answer(db, q, *client_pk_, data_->config.pir_threads);
  ByteWriter w;
  w.u32(rd);
  w.raw(pir::encode_response(resp, *client_pk_));
  state_ = source ? State::kPirDst : State::kOt2;
  return reply(source ? Tag::kPirSrcResp : Tag::kPirDstResp, w.take());
}

Frame ServerSession::on_ot2(ByteView payload) {
  ByteReader r(payload);
  std::uint32_t rd = expect_round(r);
  const RoundMaterial& m = prepare_round(rd);
  Stopwatch sw(times_.ot);
  ot::OtRequest req = ot::decode_request(r.raw(r.remaining()));
  auto pairs = z_label_pairs(*data_, m.keys);
  if (req.count() != pairs.size() || req.n != 2) throw ProtocolError("label transfer has the wrong shape");
  std::vector<ot::LabelPair> lp;
  lp.reserve(pairs.size());
  for (const auto& p : pairs) lp.push_back({label_bytes(p[0]), label_bytes(p[1])});
  ot::OtResponse resp = ot::ot2_respond(ot::OtContext{session_, rd}, lp, req, rng_);
  ByteWriter w;
  w.u32(rd);
  w.raw(ot::encode_response(resp));
  state_ = State::kGc;
  return reply(Tag::kOt2Resp, w.take());
}

Frame ServerSession::on_gc(ByteView payload) {
  ByteReader r(payload);
  std::uint32_t rd = expect_round(r);
  r.expect_end();
  const RoundMaterial& m = prepare_round(rd);
  Stopwatch sw(times_.gc);
  ByteWriter w;
  w.u32(rd);
  Bytes circuit = gc::serialize(data_->circuit, m.garbled);
  if (data_->params.delivery == Delivery::kInline) {
    w.u8(1);
    w.blob(circuit);
  } else {
    w.u8(0);
    w.raw(crypto::sha256(circuit));
  }
  for (const auto& l : server_input_labels(*data_, m)) l.write(w);
  completed_ = rd;
  if (rd == data_->params.rounds) {
    state_ = State::kDone;
  } else {
    ++round_;
    state_ = State::kPirSrc;
  }
  return reply(Tag::kGcMaterial, w.take());
}

}  // namespace privnav::protocol
