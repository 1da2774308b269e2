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

#include "privnav/protocol/harness.hpp"

#include "privnav/common/error.hpp"
#include "privnav/protocol/client.hpp"
#include "privnav/protocol/server.hpp"

namespace privnav::protocol {
namespace {

std::vector<Key128> random_keys(std::size_t n, crypto::Prng& rng) {
  std::vector<Key128> k(n);
  for (auto& x : k) x = rng.key();
  return k;
}

}  // namespace

CheatStats measure_cheat_rate(const ServerData& data, std::uint32_t s, std::uint32_t t, bool corrupt_ne,
                              bool corrupt_nw, std::uint64_t trials, std::uint64_t seed) {
  const ProtocolParams& p = data.params;
  if (s >= p.n || t >= p.n) throw InputError("cheat harness: node out of range");
  crypto::Prng rng = crypto::Prng::from_seed(seed);
  CheatStats st;
  for (std::uint64_t i = 0; i < trials; ++i) {
    Key128 session = rng.key();
    auto src = random_keys(p.n, rng), next = random_keys(p.n, rng), dst = random_keys(p.n, rng);
    auto [garbled, keys] = gc::garble(data.circuit, rng);
    RoundMaterial m = build_round(data, session, 1, src, next, dst, std::move(garbled), std::move(keys), rng);
    OpenedRound o = open_round(p, session, 1, s, t, src[s], dst[t], m.src[s], m.dst[t], rng);
    if (corrupt_ne) o.z_ne = rng.uniform(p.p);
    if (corrupt_nw) o.z_nw = rng.uniform(p.p);

    auto pairs = z_label_pairs(data, m.keys);
    auto bits = z_choice_bits(p, o.z_ne, o.z_nw);
    std::vector<gc::Label> z_labels(bits.size());
    for (std::size_t b = 0; b < bits.size(); ++b) z_labels[b] = pairs[b][bits[b]];
    auto labels = assemble_labels(data.circuit, z_labels, server_input_labels(data, m), o);
    RoundOutcome out = finish_round(p, data.circuit, &m.garbled, labels, session, 1, s, o, rng);
    ++st.trials;
    if (out.circuit_valid) ++st.accepted;
  }
  return st;
}

const char* strategy_name(CheatStrategy s) {
  switch (s) {
    case CheatStrategy::kOffPathPir:
      return "off-path-pir";
    case CheatStrategy::kStaleKey:
      return "stale-key";
    case CheatStrategy::kWrongDestination:
      return "wrong-destination";
  }
  return "?";
}

ConsistencyStats run_cheating_client(std::shared_ptr<const ServerData> data, CheatStrategy strategy,
                                     std::uint64_t trials, std::uint64_t seed,
                                     std::shared_ptr<const pir::PaillierKeypair> keys) {
  const std::uint32_t n = data->params.n, rounds = data->params.rounds;
  if (n < 3) throw InputError("cheating client needs at least three nodes");
  crypto::Prng rng = crypto::Prng::from_seed(seed);
  ConsistencyStats st;
  for (std::uint64_t i = 0; i < trials; ++i) {
    ClientConfig cc;
    cc.s = static_cast<std::uint32_t>(rng.uniform(n));
    do cc.t = static_cast<std::uint32_t>(rng.uniform(n));
    while (cc.t == cc.s);
    const std::uint32_t cheat_round = 1 + static_cast<std::uint32_t>(rng.uniform(rounds));
    // The stale key needs an earlier round to come from.
    const std::uint32_t from_round = cheat_round == 1 ? 1 : 1 + static_cast<std::uint32_t>(rng.uniform(cheat_round - 1));
    const std::uint32_t other = static_cast<std::uint32_t>(rng.uniform(n));

    std::vector<Key128> held;  // source key held at the start of each round
    std::vector<std::uint32_t> at;
    bool cheated = false;
    auto& h = cc.hooks;
    h.src_key = [&](std::uint32_t r, Key128& k) {
      held.push_back(k);
      if (strategy == CheatStrategy::kStaleKey && r == cheat_round && from_round < r) {
        k = held[from_round - 1];
        cheated = true;
      }
    };
    h.src_index = [&](std::uint32_t r, std::uint32_t s) {
      at.push_back(s);
      if (strategy == CheatStrategy::kOffPathPir && r == cheat_round && other != s) {
        cheated = true;
        return other;
      }
      return s;
    };
    h.dst_index = [&](std::uint32_t r, std::uint32_t t) {
      if (strategy == CheatStrategy::kWrongDestination && r == cheat_round && other != t) {
        cheated = true;
        return other;
      }
      return t;
    };
    h.on_round = [&](const RoundView& v) {
      // Anything opened under a deviation is a record the honest walk would
      // not have opened in this round.
      const bool src_off = v.src_index != at.back() || v.src_key != held.back();
      const bool dst_off = v.dst_index != v.t;
      if (src_off && v.opened->src_ok) ++st.off_path_decryptions;
      if (dst_off && v.opened->dst_ok) ++st.off_path_decryptions;
    };

    ServerSession server(data, rng.fork());
    DirectTransport tr(server);
    ClientSession client(cc, rng.fork());
    client.use_paillier_keys(keys);
    client.run(tr);
    ++st.trials;
    if (cheated) ++st.cheating_rounds;
  }
  return st;
}

}  // namespace privnav::protocol
