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

#include "privnav/protocol/client.hpp"

#include <chrono>

#include "privnav/common/error.hpp"
#include "privnav/ot/ot.hpp"
#include "privnav/protocol/server.hpp"

namespace privnav::protocol {
namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Bytes round_payload(std::uint32_t round, ByteView body) {
  ByteWriter w;
  w.u32(round);
  w.raw(body);
  return w.take();
}

// Strips and checks the round prefix of a server reply.
ByteView round_body(const Frame& f, std::uint32_t round) {
  ByteReader r(f.payload);
  if (r.u32() != round) throw DecodeError("reply for the wrong round");
  return r.raw(r.remaining());
}

}  // namespace

Frame DirectTransport::exchange(const Frame& request) { return server_.handle(request); }

Path ideal_path(const roadgraph::RoadGraph& g, const roadgraph::NextHopMatrices& m, std::uint32_t s,
                std::uint32_t t, std::uint32_t rounds) {
  Path p;
  if (s != t)
    for (std::uint32_t v : roadgraph::next_hop_walk(g, m, s, t)) p.emplace_back(v);
  if (p.size() > rounds) throw InputError("route is longer than R");
  p.resize(rounds);
  return p;
}

ClientSession::ClientSession(ClientConfig config, crypto::Prng rng) : cfg_(std::move(config)), rng_(std::move(rng)) {}

void ClientSession::use_paillier_keys(std::shared_ptr<const pir::PaillierKeypair> keys) { keys_ = std::move(keys); }

Frame ClientSession::exchange(Transport& t, Tag tag, Bytes payload, Tag expect) {
  Frame resp = t.exchange(Frame{tag, std::move(payload)});
  if (resp.tag == Tag::kError) throw ProtocolError("server error: " + resp.error_message());
  if (resp.tag != expect)
    throw ProtocolError(std::string("expected ") + tag_name(expect) + " reply, got " +
                        (is_known_tag(static_cast<std::uint8_t>(resp.tag)) ? tag_name(resp.tag) : "unknown tag"));
  return resp;
}

void ClientSession::setup(Transport& t) {
  auto t0 = std::chrono::steady_clock::now();
  if (!keys_) {
    keys_ = std::make_shared<pir::PaillierKeypair>(pir::paillier_keygen(cfg_.paillier_bits, rng_));
    stats_.keygen = seconds_since(t0);
  }

  Frame params = exchange(t, Tag::kSessionParams, encode_hello(keys_->pk), Tag::kSessionParams);
  {
    ByteReader r(params.payload);
    if (r.u32() != kProtocolVersion) throw ProtocolError("server speaks a different protocol version");
    r.raw(session_.data(), session_.size());
    params_ = read_params(r);
    r.expect_end();
  }
  try {
    params_.validate(cfg_.allow_toy_field);
  } catch (const InputError& e) {
    throw ProtocolError(std::string("server parameters rejected: ") + e.what());
  }
  if (cfg_.s >= params_.n || cfg_.t >= params_.n)
    throw InputError("node index out of range (graph has " + std::to_string(params_.n) + " nodes)");
  circuit_ = gc::build_neighbor_circuit(params_.neighbor_params());
  src_geom_ = source_geometry(params_, keys_->pk.bits);
  dst_geom_ = dest_geometry(params_, keys_->pk.bits);

  auto [req, secret] = ot::ot_receiver_request(ot::OtContext{session_, 0}, {cfg_.s, cfg_.t}, params_.n, rng_);
  Frame resp = exchange(t, Tag::kSetupOtReq, ot::encode_request(req), Tag::kSetupOtResp);
  std::vector<Bytes> got;
  try {
    got = ot::ot_receiver_finish(ot::decode_response(resp.payload), secret);
  } catch (const DecodeError& e) {
    throw ProtocolError(std::string("setup transfer failed: ") + e.what());
  }
  if (got[0].size() != 16 || got[1].size() != 16) throw ProtocolError("setup transfer returned malformed keys");
  std::copy(got[0].begin(), got[0].end(), k_src_.begin());
  std::copy(got[1].begin(), got[1].end(), k_dst_.begin());

  if (params_.delivery == Delivery::kOffline) {
    ByteWriter w;
    w.u32(0);
    Frame m = exchange(t, Tag::kGcMaterial, w.take(), Tag::kGcMaterial);
    ByteReader r(m.payload);
    if (r.u32() != 0 || r.u32() != params_.rounds) throw ProtocolError("offline circuit bundle has the wrong shape");
    for (std::uint32_t k = 0; k < params_.rounds; ++k) {
      ByteView blob = r.blob();
      offline_digest_.push_back(crypto::sha256(blob));
      // A corrupt circuit only spoils its own round.
      try {
        offline_.emplace_back(gc::deserialize(circuit_, blob));
      } catch (const DecodeError&) {
        offline_.emplace_back(std::nullopt);
      }
    }
    r.expect_end();
  }
  s_ = cfg_.s;
  round_ = 0;
  ready_ = true;
  stats_.setup = seconds_since(t0);
}

std::optional<std::uint32_t> ClientSession::run_round(Transport& t) {
  if (!ready_) throw InputError("client: setup has not run");
  if (round_ >= params_.rounds) throw InputError("client: all rounds already executed");
  const std::uint32_t r = ++round_;
  const auto& hooks = cfg_.hooks;
  ClientRoundStats st;
  auto t0 = std::chrono::steady_clock::now();

  // Retrieval of both records.
  std::uint32_t src_idx = hooks.src_index ? hooks.src_index(r, s_) : s_;
  std::uint32_t dst_idx = hooks.dst_index ? hooks.dst_index(r, cfg_.t) : cfg_.t;
  auto pir_fetch = [&](Tag tag, Tag expect, std::uint32_t idx, const pir::PirGeometry& g) {
    pir::PirQuery q = pir::pir_query(idx, g, *keys_, rng_);
    Frame f = exchange(t, tag, round_payload(r, pir::encode_query(q, keys_->pk)), expect);
    try {
      return pir::pir_decode(pir::decode_response(round_body(f, r), g), g, *keys_);
    } catch (const ProtocolError&) {
      return Bytes(g.record_bytes, 0);
    }
  };
  auto tp = std::chrono::steady_clock::now();
  Bytes src = pir_fetch(Tag::kPirSrcReq, Tag::kPirSrcResp, src_idx, *src_geom_);
  Bytes dst = pir_fetch(Tag::kPirDstReq, Tag::kPirDstResp, dst_idx, *dst_geom_);
  st.pir = seconds_since(tp);

  Key128 k_src = k_src_;
  if (hooks.src_key) hooks.src_key(r, k_src);
  OpenedRound opened = open_round(params_, session_, r, s_, cfg_.t, k_src, k_dst_, src, dst, rng_);
  if (hooks.z) hooks.z(r, opened.z_ne, opened.z_nw);

  // Labels for z by oblivious transfer.
  auto to = std::chrono::steady_clock::now();
  auto bits = z_choice_bits(params_, opened.z_ne, opened.z_nw);
  auto [req, secret] = ot::ot2_request(ot::OtContext{session_, r}, bits, rng_);
  Frame otf = exchange(t, Tag::kOt2Req, round_payload(r, ot::encode_request(req)), Tag::kOt2Resp);
  std::vector<gc::Label> z_labels;
  try {
    for (const Bytes& b : ot::ot2_finish(ot::decode_response(round_body(otf, r)), secret)) {
      ByteReader br(b);
      z_labels.push_back(gc::Label::read(br));
      br.expect_end();
    }
  } catch (const ProtocolError&) {
    z_labels.clear();
  }
  st.ot = seconds_since(to);

  // Server inputs and the circuit itself.
  auto tg = std::chrono::steady_clock::now();
  ByteWriter gw;
  gw.u32(r);
  Frame gcf = exchange(t, Tag::kGcMaterial, gw.take(), Tag::kGcMaterial);
  std::optional<gc::GarbledCircuit> inline_circuit;
  const gc::GarbledCircuit* garbled = nullptr;
  std::vector<gc::Label> server_labels;
  try {
    ByteReader gr(round_body(gcf, r));
    std::uint8_t has_circuit = gr.u8();
    if (has_circuit == 1) {
      inline_circuit = gc::deserialize(circuit_, gr.blob());
      garbled = &*inline_circuit;
    } else if (has_circuit == 0 && params_.delivery == Delivery::kOffline) {
      crypto::Digest pinned;
      gr.raw(pinned.data(), pinned.size());
      if (pinned == offline_digest_[r - 1] && offline_[r - 1]) garbled = &*offline_[r - 1];
    }
    while (gr.remaining() > 0) server_labels.push_back(gc::Label::read(gr));
  } catch (const ProtocolError&) {
    garbled = nullptr;
  }

  RoundOutcome outcome;
  try {
    auto labels = assemble_labels(circuit_, z_labels, server_labels, opened);
    outcome = finish_round(params_, circuit_, garbled, labels, session_, r, s_, opened, rng_);
  } catch (const InputError&) {
    outcome = RoundOutcome{};
    outcome.next_key = rng_.key();
  }
  st.gc = seconds_since(tg);
  if (params_.delivery == Delivery::kOffline) offline_[r - 1].reset();

  if (hooks.on_round) {
    RoundView v;
    v.round = r;
    v.s = s_;
    v.t = cfg_.t;
    v.src_index = src_idx;
    v.dst_index = dst_idx;
    v.src_sealed = &src;
    v.dst_sealed = &dst;
    v.src_key = k_src;
    v.dst_key = k_dst_;
    v.opened = &opened;
    v.outcome = &outcome;
    hooks.on_round(v);
  }

  if (outcome.hop) s_ = *outcome.hop;
  k_src_ = outcome.next_key;
  path_.push_back(outcome.hop);
  st.total = seconds_since(t0);
  stats_.rounds.push_back(st);
  return outcome.hop;
}

Path ClientSession::run(Transport& t) {
  setup(t);
  while (round_ < params_.rounds) run_round(t);
  return path_;
}

}  // namespace privnav::protocol
