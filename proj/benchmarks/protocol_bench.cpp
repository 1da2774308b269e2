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

#include <benchmark/benchmark.h>

#include "privnav/protocol/client.hpp"
#include "privnav/protocol/server.hpp"

using namespace privnav;

// One full round per iteration on a w x w unit grid.
static void BM_ProtocolRound(benchmark::State& state) {
  const auto w = static_cast<std::size_t>(state.range(0));
  const auto bits = static_cast<unsigned>(state.range(1));
  auto g = roadgraph::preprocess(roadgraph::synth_grid(w, w));
  auto c = signfactor::compress_routing(roadgraph::all_pairs_next_hop(g), {});
  auto data = protocol::make_server_data(g, c, {});
  crypto::Prng rng = crypto::Prng::from_seed(1);
  auto keys = std::make_shared<const pir::PaillierKeypair>(pir::paillier_keygen(bits, rng));
  const auto n = static_cast<std::uint32_t>(g.n());
  std::unique_ptr<protocol::ServerSession> server;
  std::unique_ptr<protocol::DirectTransport> tr;
  std::unique_ptr<protocol::ClientSession> client;
  for (auto _ : state) {
    if (!client || client->rounds_done() == data->params.rounds) {
      state.PauseTiming();
      server = std::make_unique<protocol::ServerSession>(data, rng.fork());
      tr = std::make_unique<protocol::DirectTransport>(*server);
      protocol::ClientConfig cc;
      cc.s = 0;
      cc.t = n - 1;
      client = std::make_unique<protocol::ClientSession>(cc, rng.fork());
      client->use_paillier_keys(keys);
      client->setup(*tr);
      state.ResumeTiming();
    }
    benchmark::DoNotOptimize(client->run_round(*tr));
  }
  state.counters["n"] = n;
}
BENCHMARK(BM_ProtocolRound)->Args({8, 512})->Args({20, 1024})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
