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

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "privnav/common/error.hpp"
#include "privnav/ot/ot.hpp"
#include "privnav/protocol/client.hpp"
#include "privnav/protocol/harness.hpp"
#include "privnav/protocol/server.hpp"
#include "test_util.hpp"

using namespace privnav;
using namespace privnav::protocol;
using roadgraph::Direction;

namespace {

struct World {
  roadgraph::RoadGraph g;
  roadgraph::NextHopMatrices m;
  signfactor::CompressedRouting c;
  std::shared_ptr<const ServerData> data;
};

World make_world(const roadgraph::RoadGraph& raw, ServerConfig cfg = {}) {
  World w;
  w.g = roadgraph::preprocess(raw);
  w.m = roadgraph::all_pairs_next_hop(w.g);
  w.c = signfactor::compress_routing(w.m, {});
  w.data = make_server_data(w.g, w.c, cfg);
  return w;
}

const World& grid4() {
  static World w = make_world(roadgraph::synth_grid(4, 4));
  return w;
}

std::shared_ptr<const pir::PaillierKeypair> test_keys() {
  static auto k = [] {
    crypto::Prng rng = crypto::Prng::from_seed(512);
    return std::make_shared<const pir::PaillierKeypair>(pir::paillier_keygen(512, rng));
  }();
  return k;
}

ClientSession make_client(std::uint32_t s, std::uint32_t t, std::uint64_t seed, ClientHooks hooks = {}) {
  ClientConfig cc;
  cc.s = s;
  cc.t = t;
  cc.hooks = std::move(hooks);
  ClientSession c(cc, crypto::Prng::from_seed(seed));
  c.use_paillier_keys(test_keys());
  return c;
}

Path navigate(const World& w, std::uint32_t s, std::uint32_t t, std::uint64_t seed = 1) {
  ServerSession server(w.data, crypto::Prng::from_seed(seed));
  DirectTransport tr(server);
  ClientSession client = make_client(s, t, seed + 7);
  Path p = client.run(tr);
  EXPECT_TRUE(server.done());
  EXPECT_FALSE(server.failed());
  return p;
}

// Applies an edit to selected server replies.
class TamperTransport : public Transport {
 public:
  TamperTransport(ServerSession& s, std::function<void(Frame&)> edit) : inner_(s), edit_(std::move(edit)) {}
  Frame exchange(const Frame& request) override {
    Frame f = inner_.exchange(request);
    edit_(f);
    return f;
  }

 private:
  DirectTransport inner_;
  std::function<void(Frame&)> edit_;
};

}  // namespace

TEST(ProtocolSetup, SessionKeysAreDistinctAndDelivered) {
  const World& w = grid4();
  ServerSession server(w.data, crypto::Prng::from_seed(3));
  DirectTransport tr(server);
  ClientSession client = make_client(2, 13, 4);
  client.setup(tr);
  const auto& src = server.source_keys(1);
  const auto& dst = server.dest_keys();
  std::set<Key128> all(src.begin(), src.end());
  all.insert(dst.begin(), dst.end());
  EXPECT_EQ(all.size(), 2 * w.g.n());
  EXPECT_EQ(client.source_key(), src[2]);
  EXPECT_EQ(client.dest_key(), dst[13]);
  EXPECT_EQ(client.session_id(), server.session_id());

  ServerSession other(w.data, crypto::Prng::from_seed(99));
  EXPECT_NE(other.source_keys(1)[2], src[2]);
  EXPECT_NE(other.session_id(), server.session_id());
}

TEST(ProtocolSetup, ServerDataRejectsMismatches) {
  const World& w = grid4();
  signfactor::CompressedRouting bad = w.c;
  bad.tau = 1;
  EXPECT_THROW(make_server_data(w.g, bad, {}), InputError);
  World small = make_world(roadgraph::synth_grid(3, 3));
  EXPECT_THROW(make_server_data(small.g, w.c, {}), InputError);
  EXPECT_THROW(make_server_data(roadgraph::synth_grid(4, 4), w.c, {}), InputError);  // not oriented
  ServerConfig toy;
  toy.p = 8191;
  EXPECT_THROW(make_server_data(w.g, w.c, toy), InputError);
  ServerConfig rounds;
  rounds.rounds = 1;
  EXPECT_THROW(make_server_data(w.g, w.c, rounds), InputError);
  rounds.rounds = w.data->params.rounds + 3;
  EXPECT_EQ(make_server_data(w.g, w.c, rounds)->params.rounds, w.data->params.rounds + 3);
}

TEST(ProtocolSetup, RoundsAreTheLongestWalk) {
  const World& w = grid4();
  EXPECT_EQ(w.data->params.rounds, roadgraph::max_walk_length(w.g, w.m));
  EXPECT_EQ(w.data->params.rounds, 6u);  // corner to corner on a unit 4x4 grid
}

TEST(ProtocolSetup, ClientRejectsBadNodes) {
  const World& w = grid4();
  ServerSession server(w.data, crypto::Prng::from_seed(3));
  DirectTransport tr(server);
  ClientSession client = make_client(0, 16, 4);
  EXPECT_THROW(client.setup(tr), InputError);
  ClientSession early = make_client(0, 1, 4);
  EXPECT_THROW(early.run_round(tr), InputError);
}

TEST(DirectionKeys, MatchLiteralFormula) {
  crypto::Prng rng = crypto::Prng::from_seed(21);
  for (int trial = 0; trial < 20; ++trial) {
    Key128 ne0 = rng.key(), ne1 = rng.key(), nw0 = rng.key(), nw1 = rng.key();
    DirectionKeys keys = derive_direction_keys(ne0, ne1, nw0, nw1);
    for (Direction d : {Direction::N, Direction::E, Direction::W, Direction::S}) {
      auto [b_ne, b_nw] = roadgraph::direction_to_index(d);
      Key128 a = prf(b_ne ? ne1 : ne0, d), b = prf(b_nw ? nw1 : nw0, d);
      Key128 want;
      for (int i = 0; i < 16; ++i) want[i] = a[i] ^ b[i];
      EXPECT_EQ(keys[static_cast<std::size_t>(d)], want);
      EXPECT_EQ(direction_key(b_ne ? ne1 : ne0, b_nw ? nw1 : nw0, d), want);
    }
    std::set<Key128> distinct(keys.begin(), keys.end());
    EXPECT_EQ(distinct.size(), 4u);
  }
}

TEST(DirectionKeys, PrfSeparatesDirections) {
  Key128 k{};
  k[0] = 1;
  std::set<Key128> out;
  for (Direction d : {Direction::N, Direction::E, Direction::W, Direction::S}) out.insert(prf(k, d));
  EXPECT_EQ(out.size(), 4u);
}

TEST(Records, UniformSizeAndKeyBinding) {
  const World& w = grid4();
  ServerSession server(w.data, crypto::Prng::from_seed(8));
  DirectTransport tr(server);
  ClientSession client = make_client(0, 5, 9);
  client.setup(tr);
  const RoundMaterial& m = server.prepare_round(1);
  const RecordShape& shape = w.data->shape;
  for (const auto& r : m.src) EXPECT_EQ(r.size(), shape.source_sealed());
  for (const auto& r : m.dst) EXPECT_EQ(r.size(), shape.dest_sealed());
  const auto& src = server.source_keys(1);
  const Key128& sid = server.session_id();
  for (std::uint32_t u = 0; u < w.g.n(); ++u) {
    EXPECT_TRUE(open_source(src[u], sid, 1, u, m.src[u], shape, w.data->params.p));
    EXPECT_FALSE(open_source(src[(u + 1) % w.g.n()], sid, 1, u, m.src[u], shape, w.data->params.p));
    EXPECT_FALSE(open_source(src[u], sid, 2, u, m.src[u], shape, w.data->params.p));
    EXPECT_FALSE(open_dest(src[u], sid, 1, u, m.dst[u], shape, w.data->params.p));
    EXPECT_TRUE(open_dest(server.dest_keys()[u], sid, 1, u, m.dst[u], shape, w.data->params.p));
  }
}

TEST(Protocol, HonestWalksMatchOracleOnGrid) {
  const World& w = grid4();
  crypto::Prng rng = crypto::Prng::from_seed(31);
  for (int i = 0; i < 6; ++i) {
    auto s = static_cast<std::uint32_t>(rng.uniform(16)), t = static_cast<std::uint32_t>(rng.uniform(16));
    EXPECT_EQ(navigate(w, s, t, 100 + i), ideal_path(w.g, w.m, s, t, w.data->params.rounds)) << s << "->" << t;
  }
}

TEST(Protocol, RandomWeightsAndRandomGraph) {
  World a = make_world(roadgraph::synth_grid(4, 3, {roadgraph::WeightRule::Kind::kRandom, 5}));
  EXPECT_EQ(navigate(a, 0, 11), ideal_path(a.g, a.m, 0, 11, a.data->params.rounds));
  EXPECT_EQ(navigate(a, 7, 2), ideal_path(a.g, a.m, 7, 2, a.data->params.rounds));
  World b = make_world(roadgraph::synth_random(14, 6));
  for (std::uint32_t s : {0u, 5u})
    for (std::uint32_t t : {3u, 13u})
      EXPECT_EQ(navigate(b, s, t), ideal_path(b.g, b.m, s, t, b.data->params.rounds));
}

TEST(Protocol, SameSourceAndTargetIsAllBottom) {
  const World& w = grid4();
  Path p = navigate(w, 6, 6);
  ASSERT_EQ(p.size(), w.data->params.rounds);
  for (auto& h : p) EXPECT_FALSE(h);
}

TEST(Protocol, AdjacentPairTakesOneHop) {
  const World& w = grid4();
  Path p = navigate(w, 5, 6);
  ASSERT_EQ(p.size(), w.data->params.rounds);
  EXPECT_EQ(p[0], std::optional<std::uint32_t>(6));
  for (std::size_t i = 1; i < p.size(); ++i) EXPECT_FALSE(p[i]);
}

TEST(Protocol, ExactlyRRoundsThenClosed) {
  const World& w = grid4();
  ServerSession server(w.data, crypto::Prng::from_seed(2));
  DirectTransport tr(server);
  ClientSession client = make_client(0, 15, 3);
  Path p = client.run(tr);
  EXPECT_EQ(p.size(), w.data->params.rounds);
  EXPECT_EQ(server.completed_rounds(), w.data->params.rounds);
  EXPECT_TRUE(server.done());
  EXPECT_THROW(client.run_round(tr), InputError);
  ByteWriter wr;
  wr.u32(w.data->params.rounds + 1);
  Frame f = server.handle(Frame{Tag::kPirSrcReq, wr.take()});
  EXPECT_EQ(f.tag, Tag::kError);
  EXPECT_TRUE(server.failed());
}

TEST(Protocol, KeyChainFollowsTheWalk) {
  const World& w = grid4();
  ServerSession server(w.data, crypto::Prng::from_seed(12));
  DirectTransport tr(server);
  ClientSession client = make_client(0, 15, 13);
  client.setup(tr);
  Path ideal = ideal_path(w.g, w.m, 0, 15, w.data->params.rounds);
  std::uint32_t at = 0;
  for (std::uint32_t r = 1; r <= w.data->params.rounds; ++r) {
    auto hop = client.run_round(tr);
    EXPECT_EQ(hop, ideal[r - 1]);
    if (hop) at = *hop;
    const auto& next = server.source_keys(r + 1);
    if (hop) {
      // The client holds exactly one key for the next round: the one for its new position.
      EXPECT_EQ(client.source_key(), next[at]);
    } else {
      EXPECT_EQ(std::count(next.begin(), next.end(), client.source_key()), 0);
    }
    if (r == w.data->params.rounds) break;
    // Try every next-round record with every key the client holds.
    const RoundMaterial& m = server.prepare_round(r + 1);
    int opened = 0;
    for (std::uint32_t u = 0; u < w.g.n(); ++u)
      for (const Key128& k : {client.source_key(), client.dest_key()})
        if (open_source(k, server.session_id(), r + 1, u, m.src[u], w.data->shape, w.data->params.p)) {
          ++opened;
          EXPECT_EQ(u, at);
        }
    EXPECT_EQ(opened, hop ? 1 : 0) << "round " << r;
  }
}

TEST(ProtocolSetup, MalformedTransferProofRefused) {
  const World& w = grid4();
  ServerSession server(w.data, crypto::Prng::from_seed(1));
  Frame params = server.handle(Frame{Tag::kSessionParams, encode_hello(test_keys()->pk)});
  ASSERT_EQ(params.tag, Tag::kSessionParams);
  ByteReader r(params.payload);
  r.u32();
  Key128 sid;
  r.raw(sid.data(), sid.size());
  crypto::Prng rng = crypto::Prng::from_seed(2);
  auto [req, secret] = ot::ot_receiver_request(ot::OtContext{sid, 0}, {1, 2}, w.g.n(), rng);
  Bytes b = ot::encode_request(req);
  b[70] ^= 1;  // inside the proof response scalar
  Frame f = server.handle(Frame{Tag::kSetupOtReq, b});
  EXPECT_EQ(f.tag, Tag::kError);
  EXPECT_TRUE(server.failed());
}

TEST(Protocol, ForcedDirectionWithoutNeighbourIsBottom) {
  // Node 0 of a 2x2 grid sits in a corner, so two directions have no neighbour.
  World w = make_world(roadgraph::synth_grid(2, 2));
  const field::Field f(w.data->params.p);
  int absent_seen = 0, present_seen = 0;
  for (int combo = 0; combo < 4; ++combo) {
    ServerSession server(w.data, crypto::Prng::from_seed(40 + combo));
    ClientHooks h;
    h.z = [&](std::uint32_t r, field::Elem& z_ne, field::Elem& z_nw) {
      // Encode +-1 on each axis under the server's blinding.
      const RoundMaterial& m = server.prepare_round(r);
      auto enc = [&](const field::BlindingSet& b, bool pos) {
        return f.add(f.mul(b.alpha, pos ? 1 : f.neg(1)), b.beta);
      };
      z_ne = enc(m.ne, combo & 1);
      z_nw = enc(m.nw, combo & 2);
    };
    std::optional<RoundOutcome> first;
    h.on_round = [&](const RoundView& v) {
      if (v.round == 1) first = *v.outcome;
    };
    DirectTransport tr(server);
    ClientSession client = make_client(0, 3, 50 + combo, h);
    client.setup(tr);
    client.run_round(tr);
    ASSERT_TRUE(first && first->circuit_valid && first->dir);
    std::uint32_t v = w.data->params.neighbor(0, *first->dir);
    if (v == roadgraph::kNoNode) {
      ++absent_seen;
      EXPECT_FALSE(first->hop);
      EXPECT_EQ(client.current(), 0u);
    } else {
      ++present_seen;
      EXPECT_EQ(first->hop, std::optional<std::uint32_t>(v));
      EXPECT_EQ(client.current(), v);
    }
  }
  EXPECT_EQ(absent_seen, 2);
  EXPECT_EQ(present_seen, 2);
}

TEST(Protocol, ServerViewIndependentOfClientInputs) {
  const World& w = grid4();
  std::optional<std::vector<std::pair<Tag, std::size_t>>> first;
  crypto::Prng rng = crypto::Prng::from_seed(77);
  for (int i = 0; i < 5; ++i) {
    auto s = static_cast<std::uint32_t>(rng.uniform(16)), t = static_cast<std::uint32_t>(rng.uniform(16));
    ServerSession server(w.data, crypto::Prng::from_seed(i));
    DirectTransport tr(server);
    ClientSession client = make_client(s, t, 200 + i);
    client.run(tr);
    if (!first)
      first = server.received();
    else
      EXPECT_EQ(server.received(), *first) << s << "->" << t;
  }
}

TEST(Protocol, InlineDeliveryMatchesOffline) {
  ServerConfig cfg;
  cfg.delivery = Delivery::kInline;
  World w = make_world(roadgraph::synth_grid(3, 3), cfg);
  EXPECT_EQ(navigate(w, 0, 8), ideal_path(w.g, w.m, 0, 8, w.data->params.rounds));
  EXPECT_EQ(navigate(w, 7, 1), ideal_path(w.g, w.m, 7, 1, w.data->params.rounds));
}

TEST(Protocol, VersionMismatchAndOutOfOrderFrames) {
  const World& w = grid4();
  ServerSession a(w.data, crypto::Prng::from_seed(1));
  ByteWriter hello;
  hello.u32(kProtocolVersion + 1);
  Frame r = a.handle(Frame{Tag::kSessionParams, hello.take()});
  EXPECT_EQ(r.tag, Tag::kError);
  EXPECT_NE(r.error_message().find("version"), std::string::npos);
  EXPECT_TRUE(a.failed());
  EXPECT_EQ(a.handle(Frame{Tag::kSessionParams, encode_hello(test_keys()->pk)}).tag, Tag::kError);

  ServerSession b(w.data, crypto::Prng::from_seed(1));
  EXPECT_EQ(b.handle(Frame{Tag::kPirSrcReq, {}}).tag, Tag::kError);
  EXPECT_TRUE(b.failed());

  ServerSession c(w.data, crypto::Prng::from_seed(1));
  DirectTransport tr(c);
  ClientSession client = make_client(0, 1, 4);
  client.setup(tr);
  ByteWriter wrong_round;
  wrong_round.u32(2);
  EXPECT_EQ(c.handle(Frame{Tag::kPirSrcReq, wrong_round.take()}).tag, Tag::kError);
  EXPECT_THROW(client.run_round(tr), ProtocolError);
}

TEST(Protocol, WeakModulusRefused) {
  const World& w = grid4();
  ServerSession server(w.data, crypto::Prng::from_seed(1));
  DirectTransport tr(server);
  ClientConfig cc;
  cc.s = 0;
  cc.t = 1;
  cc.paillier_bits = 256;
  ClientSession client(cc, crypto::Prng::from_seed(2));
  EXPECT_THROW(client.setup(tr), ProtocolError);
}

TEST(Protocol, CorruptedRoundMaterialYieldsBottomNotAbort) {
  const World& w = grid4();
  for (Tag target : {Tag::kPirSrcResp, Tag::kPirDstResp, Tag::kOt2Resp, Tag::kGcMaterial}) {
    ServerSession server(w.data, crypto::Prng::from_seed(5));
    int seen = 0;
    TamperTransport tr(server, [&](Frame& f) {
      // Leave the offline bundle alone; corrupt the second round's reply.
      // The transfer reply is hit in its shared point: a flip inside a
      // record the client did not choose would go unnoticed, as it should.
      if (f.tag == target && f.payload.size() > 8) {
        ByteReader r(f.payload);
        std::size_t at = target == Tag::kOt2Resp ? 6 : f.payload.size() / 2;
        if (r.u32() == 2 && seen++ == 0) f.payload[at] ^= 0x40;
      }
    });
    ClientSession client = make_client(0, 15, 6);
    Path p = client.run(tr);
    Path ideal = ideal_path(w.g, w.m, 0, 15, w.data->params.rounds);
    EXPECT_EQ(p[0], ideal[0]) << tag_name(target);
    for (std::size_t i = 1; i < p.size(); ++i) EXPECT_FALSE(p[i]) << tag_name(target) << " round " << i + 1;
    EXPECT_TRUE(server.done());
  }
}

TEST(Protocol, ReplacedOfflineCircuitIsDetected) {
  const World& w = grid4();
  ServerSession server(w.data, crypto::Prng::from_seed(5));
  TamperTransport tr(server, [&](Frame& f) {
    if (f.tag != Tag::kGcMaterial) return;
    ByteReader r(f.payload);
    // Round 1 reply: u32 round, u8 inline flag, digest. Flip a digest byte.
    if (r.u32() == 1) f.payload[5] ^= 1;
  });
  ClientSession client = make_client(0, 15, 6);
  Path p = client.run(tr);
  for (auto& h : p) EXPECT_FALSE(h);
}

TEST(Protocol, ErrorFrameAbortsClientSetup) {
  const World& w = grid4();
  ServerSession server(w.data, crypto::Prng::from_seed(5));
  TamperTransport tr(server, [](Frame& f) {
    if (f.tag == Tag::kSetupOtResp) f = Frame::error("injected");
  });
  ClientSession client = make_client(0, 3, 6);
  try {
    client.setup(tr);
    FAIL() << "setup should throw";
  } catch (const ProtocolError& e) {
    EXPECT_NE(std::string(e.what()).find("injected"), std::string::npos);
  }
}

std::shared_ptr<const ServerData> toy_path_data() {
  // The three-node path compresses with tau = 4.
  ServerConfig cfg;
  cfg.p = 8191;
  cfg.allow_toy_field = true;
  World w = make_world(roadgraph::synth_grid(3, 1), cfg);
  EXPECT_EQ(w.data->params.tau, 4u);
  return w.data;
}

TEST(CheatHarness, HonestRoundsAlwaysAccepted) {
  auto data = toy_path_data();
  EXPECT_EQ(measure_cheat_rate(*data, 0, 2, false, false, 200, 1).accepted, 200u);
  EXPECT_EQ(measure_cheat_rate(*data, 1, 1, false, false, 50, 1).accepted, 0u);
}

TEST(CheatHarness, RandomisedAxisRate) {
  auto data = toy_path_data();
  // 33 of the 8191 residues decode into the accepted window [-2^tau, 2^tau] on the corrupted axis.
  const double trials = 20000;
  CheatStats st = measure_cheat_rate(*data, 0, 2, true, false, static_cast<std::uint64_t>(trials), 2);
  EXPECT_TRUE(privnav::testing::within_sigma(static_cast<double>(st.accepted), trials, 33.0 / 8191, 4))
      << st.accepted;
}

TEST(Consistency, ScriptedCheatersOpenNothingOffPath) {
  World w = make_world(roadgraph::synth_grid(3, 3));
  for (CheatStrategy s : {CheatStrategy::kOffPathPir, CheatStrategy::kStaleKey, CheatStrategy::kWrongDestination}) {
    ConsistencyStats st = run_cheating_client(w.data, s, 6, 9, test_keys());
    EXPECT_EQ(st.trials, 6u);
    EXPECT_GT(st.cheating_rounds, 0u) << strategy_name(s);
    EXPECT_EQ(st.off_path_decryptions, 0u) << strategy_name(s);
  }
}
