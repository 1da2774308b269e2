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

#include "privnav/cli/commands.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "privnav/common/error.hpp"
#include "privnav/protocol/server.hpp"
#include "privnav/service/tcp.hpp"

namespace privnav::cli {
namespace {

crypto::Prng seeded(std::uint64_t seed) { return seed ? crypto::Prng::from_seed(seed) : crypto::Prng::from_os(); }

protocol::ServerConfig server_config(const ServeOptions& o) {
  protocol::ServerConfig c;
  c.p = o.field_prime;
  c.allow_toy_field = o.insecure_toy_field;
  c.pir_threads = o.pir_threads;
  c.delivery = o.inline_circuits ? protocol::Delivery::kInline : protocol::Delivery::kOffline;
  c.rounds = o.rounds;
  c.min_paillier_bits = o.min_key_bits;
  return c;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const TransportError*>(&e)) return kExitTransport;
  if (dynamic_cast<const ProtocolError*>(&e)) return kExitProtocol;
  if (dynamic_cast<const InputError*>(&e)) return kExitInput;
  return kExitInput;
}

PreprocessSummary cmd_preprocess(const PreprocessOptions& o, std::ostream& log) {
  roadgraph::RoadGraph raw = roadgraph::load_graph_file(o.graph);
  roadgraph::RoadGraph g = roadgraph::preprocess(raw);
  roadgraph::NextHopMatrices m = roadgraph::all_pairs_next_hop(g);
  PreprocessSummary s;
  s.n = g.n();
  s.edges = g.edges().size();
  for (const auto& node : g.nodes()) s.dummies += node.dummy ? 1 : 0;
  s.rounds = roadgraph::max_walk_length(g, m);
  s.graph_out = o.graph_out.empty() ? std::filesystem::path(o.out.string() + ".graph.json") : o.graph_out;
  roadgraph::save_next_hop(m, o.out);
  std::ofstream f(s.graph_out);
  if (!f) throw InputError("cannot write " + s.graph_out.string());
  f << roadgraph::to_json(g);
  if (!f) throw InputError("cannot write " + s.graph_out.string());
  log << "preprocessed " << o.graph.string() << ": n=" << s.n << " (" << raw.n() << " input, " << s.dummies
      << " dummy) edges=" << s.edges << " R=" << s.rounds << "\n"
      << "wrote " << o.out.string() << " and " << s.graph_out.string() << "\n";
  return s;
}

signfactor::CompressedRouting cmd_compress(const CompressOptions& o, std::ostream& log) {
  roadgraph::NextHopMatrices m = roadgraph::load_next_hop(o.matrices);
  signfactor::RankSearchConfig cfg;
  cfg.d_min = o.d_min;
  cfg.d_max = o.d_max;
  cfg.optimizer.max_iterations = o.max_iterations;
  cfg.optimizer.seed = o.seed;
  signfactor::CompressionReport rep;
  signfactor::CompressedRouting c = signfactor::compress_routing(m, cfg, &rep);
  signfactor::save_compressed(c, o.out);
  log << "compressed " << o.matrices.string() << ": n=" << c.n << " d=" << c.d << " nu=" << c.nu
      << " tau=" << c.tau << " factor=" << rep.factor << "\n"
      << "wrote " << o.out.string() << "\n";
  return c;
}

std::shared_ptr<const protocol::ServerData> load_server_data(const ServeOptions& o) {
  field::Field f(o.field_prime);
  if (f.is_toy() && !o.insecure_toy_field)
    throw InputError("field prime " + std::to_string(o.field_prime) +
                     " is a toy field; pass --insecure-toy-field to use it anyway");
  roadgraph::RoadGraph g = roadgraph::load_graph_file(o.graph);
  signfactor::CompressedRouting c = signfactor::load_compressed(o.compressed);
  return protocol::make_server_data(g, c, server_config(o));
}

void cmd_serve(const ServeOptions& o, std::ostream& log, const std::atomic<bool>& stop,
               const std::function<void(std::uint16_t)>& on_listen) {
  auto data = load_server_data(o);
  service::TcpServerConfig tc;
  tc.bind = service::parse_endpoint(o.bind);
  tc.max_sessions = o.max_sessions;
  service::TcpServer server(data, tc, seeded(o.seed));
  server.start();
  log << "serving n=" << data->params.n << " d=" << data->params.d << " tau=" << data->params.tau
      << " R=" << data->params.rounds << " on " << tc.bind.host << ":" << server.port() << std::endl;
  if (on_listen) on_listen(server.port());
  while (!stop) std::this_thread::sleep_for(std::chrono::milliseconds(50));
  log << "shutting down" << std::endl;
  server.stop();
  log << "sessions: " << server.sessions_started() << " started, " << server.sessions_completed()
      << " completed, " << server.sessions_failed() << " ended early" << std::endl;
}

std::string format_path(const protocol::Path& path, std::uint32_t s, std::uint32_t t) {
  std::ostringstream out;
  if (s == t) out << "already at destination\n";
  std::uint32_t at = s;
  for (std::size_t r = 0; r < path.size(); ++r) {
    out << "round " << r + 1 << ": ";
    if (path[r]) {
      at = *path[r];
      out << at;
    } else {
      out << "-";
    }
    out << "\n";
  }
  out << (at == t ? "reached " : "stopped at ") << at << "\n";
  return out.str();
}

service::Navigation cmd_navigate(const NavigateOptions& o, std::ostream& out) {
  auto transport = service::TcpTransport::connect(service::parse_endpoint(o.server));
  protocol::ClientConfig cc;
  cc.s = o.s;
  cc.t = o.t;
  cc.paillier_bits = o.key_bits;
  cc.allow_toy_field = o.insecure_toy_field;
  protocol::ClientSession client(cc, seeded(o.seed));
  service::Navigation nav = service::navigate(client, *transport);
  nav.report.label = "navigate " + std::to_string(o.s) + "->" + std::to_string(o.t);
  if (o.json) {
    out << nav.report.json() << "\n";
  } else {
    out << format_path(nav.path, o.s, o.t) << nav.report.table();
  }
  return nav;
}

service::BenchReport cmd_bench(const BenchOptions& o, std::ostream& out) {
  ServeOptions so;
  so.inline_circuits = o.inline_circuits;
  so.pir_threads = o.pir_threads;
  so.min_key_bits = std::min(o.key_bits, 512u);
  std::shared_ptr<const protocol::ServerData> data;
  std::string label;
  if (o.graph.empty() != o.compressed.empty()) throw InputError("bench needs both --graph and --compressed, or neither");
  if (!o.graph.empty()) {
    so.graph = o.graph;
    so.compressed = o.compressed;
    data = load_server_data(so);
    label = o.graph.filename().string();
  } else {
    auto g = roadgraph::preprocess(roadgraph::synth_grid(o.grid_width, o.grid_height));
    auto c = signfactor::compress_routing(roadgraph::all_pairs_next_hop(g), {});
    data = protocol::make_server_data(g, c, server_config(so));
    label = "grid " + std::to_string(o.grid_width) + "x" + std::to_string(o.grid_height);
  }

  crypto::Prng rng = crypto::Prng::from_seed(o.seed);
  auto keys = std::make_shared<const pir::PaillierKeypair>(pir::paillier_keygen(o.key_bits, rng));
  const std::uint32_t n = data->params.n;
  service::BenchReport total;
  bool warm = false;
  while (total.rounds.size() < o.rounds) {
    protocol::ServerSession server(data, rng.fork());
    protocol::DirectTransport direct(server);
    protocol::ClientConfig cc;
    cc.s = static_cast<std::uint32_t>(rng.uniform(n));
    cc.t = static_cast<std::uint32_t>(rng.uniform(n));
    protocol::ClientSession client(cc, rng.fork());
    client.use_paillier_keys(keys);
    service::Navigation nav = service::navigate(client, direct);
    nav.report.server_prep = server.times().prep;
    nav.report.server_gc = server.times().gc;
    nav.report.server_pir = server.times().pir;
    nav.report.server_ot = server.times().ot;
    if (!warm) {
      // The first round pays for cold caches and allocator growth.
      nav.report.rounds.erase(nav.report.rounds.begin());
      warm = true;
    }
    total.merge(nav.report);
    total.n = nav.report.n;
    total.rounds_per_session = nav.report.rounds_per_session;
  }
  total.label = label;
  total.key_bits = o.key_bits;
  out << (o.json ? total.json() + "\n" : total.table());
  return total;
}

}  // namespace privnav::cli
