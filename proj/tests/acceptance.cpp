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

// Acceptance run: one PASS/FAIL line per criterion. Optional arguments
// select criteria by number, e.g. `acceptance 2 5`.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "privnav/common/error.hpp"
#include "privnav/field/field.hpp"
#include "privnav/gc/garble.hpp"
#include "privnav/gc/neighbor.hpp"
#include "privnav/ot/ot.hpp"
#include "privnav/pir/pir.hpp"
#include "privnav/protocol/client.hpp"
#include "privnav/protocol/harness.hpp"
#include "privnav/protocol/server.hpp"
#include "privnav/roadgraph/roadgraph.hpp"
#include "privnav/signfactor/signfactor.hpp"
#include "test_util.hpp"

using namespace privnav;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail.str("");
    pass = false;
    detail << why << "; ";
  }
};

std::shared_ptr<const pir::PaillierKeypair> keys_512() {
  static auto k = [] {
    crypto::Prng rng = crypto::Prng::from_seed(512);
    return std::make_shared<const pir::PaillierKeypair>(pir::paillier_keygen(512, rng));
  }();
  return k;
}

struct World {
  std::string label;
  roadgraph::RoadGraph g;
  roadgraph::NextHopMatrices m;
  signfactor::CompressedRouting c;
  signfactor::CompressionReport report;
  std::shared_ptr<const protocol::ServerData> data;
};

std::unique_ptr<World> make_world(std::string label, const roadgraph::RoadGraph& raw,
                                  protocol::ServerConfig cfg = {}) {
  auto w = std::make_unique<World>();
  w->label = std::move(label);
  w->g = roadgraph::preprocess(raw);
  w->m = roadgraph::all_pairs_next_hop(w->g);
  w->c = signfactor::compress_routing(w->m, {}, &w->report);
  w->data = protocol::make_server_data(w->g, w->c, cfg);
  return w;
}

// The end-to-end graph set, built once and shared with the compression check.
const std::vector<std::unique_ptr<World>>& e2e_worlds() {
  static std::vector<std::unique_ptr<World>> worlds = [] {
    std::vector<std::unique_ptr<World>> out;
    for (std::size_t side : {4, 8, 10}) {
      std::string dims = std::to_string(side) + "x" + std::to_string(side);
      out.push_back(make_world("grid " + dims + " unit", roadgraph::synth_grid(side, side)));
      roadgraph::WeightRule rule;
      rule.kind = roadgraph::WeightRule::Kind::kRandom;
      rule.seed = side;
      out.push_back(make_world("grid " + dims + " random", roadgraph::synth_grid(side, side, rule)));
    }
    const std::size_t sizes[10] = {12, 16, 20, 24, 30, 36, 44, 52, 64, 80};
    for (std::size_t i = 0; i < 10; ++i)
      out.push_back(make_world("random n=" + std::to_string(sizes[i]), roadgraph::synth_random(sizes[i], 100 + i)));
    return out;
  }();
  return worlds;
}

// Independent all-pairs distances over integer micro-weights.
std::vector<std::vector<std::int64_t>> floyd_warshall(const roadgraph::RoadGraph& g,
                                                     std::vector<std::vector<std::int64_t>>& w) {
  const std::size_t n = g.n();
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  w.assign(n, std::vector<std::int64_t>(n, inf));
  for (const auto& e : g.edges()) {
    std::int64_t q = std::llround(e.w * 1e6);
    if (q < w[e.from][e.to]) w[e.from][e.to] = q;
  }
  auto d = w;
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (d[i][k] < inf)
        for (std::size_t j = 0; j < n; ++j)
          if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

// The path must follow edges that each stay on a shortest route to t, reach
// t, and be bottom afterwards.
bool path_is_shortest(const protocol::Path& p, std::uint32_t s, std::uint32_t t,
                      const std::vector<std::vector<std::int64_t>>& d, const std::vector<std::vector<std::int64_t>>& w) {
  std::uint32_t at = s;
  for (const auto& hop : p) {
    if (at == t) {
      if (hop) return false;
      continue;
    }
    if (!hop) return false;
    std::uint32_t v = *hop;
    if (w[at][v] >= std::numeric_limits<std::int64_t>::max() / 4) return false;
    if (w[at][v] + d[v][t] != d[at][t]) return false;
    at = v;
  }
  return at == t;
}

protocol::Path run_session(const World& w, std::uint32_t s, std::uint32_t t, std::uint64_t seed) {
  protocol::ServerSession server(w.data, crypto::Prng::from_seed(seed));
  protocol::DirectTransport tr(server);
  protocol::ClientConfig cc;
  cc.s = s;
  cc.t = t;
  protocol::ClientSession client(cc, crypto::Prng::from_seed(seed ^ 0x5eed));
  client.use_paillier_keys(keys_512());
  return client.run(tr);
}

// 1. Private walks agree with the next-hop oracle.
Outcome end_to_end() {
  Outcome o;
  std::size_t pairs = 0, graphs = 0;
  for (const auto& wp : e2e_worlds()) {
    const World& w = *wp;
    if (w.g.n() > 150 && w.label.rfind("random", 0) == 0) o.fail(w.label + " has n=" + std::to_string(w.g.n()));
    std::vector<std::vector<std::int64_t>> wq;
    auto d = floyd_warshall(w.g, wq);
    crypto::Prng rng = crypto::Prng::from_seed(1000 + graphs);
    const auto n = static_cast<std::uint32_t>(w.g.n());
    std::size_t bad = 0;
    auto t0 = Clock::now();
    for (int i = 0; i < 50; ++i) {
      auto s = static_cast<std::uint32_t>(rng.uniform(n)), t = static_cast<std::uint32_t>(rng.uniform(n));
      protocol::Path got = run_session(w, s, t, rng.next_u64());
      protocol::Path want = protocol::ideal_path(w.g, w.m, s, t, w.data->params.rounds);
      if (got != want || !path_is_shortest(got, s, t, d, wq)) ++bad;
      ++pairs;
    }
    if (bad) o.fail(w.label + ": " + std::to_string(bad) + " of 50 mismatched");
    std::fprintf(stderr, "  e2e %-22s n=%3zu d=%2u R=%2u  %.1fs\n", w.label.c_str(), w.g.n(), w.data->params.d,
                 w.data->params.rounds, seconds_since(t0));
    ++graphs;
  }
  if (o.pass) o.detail << pairs << " pairs over " << graphs << " graphs matched";
  return o;
}

// 2. Compressed matrices reproduce every next-hop bit.
Outcome compression() {
  Outcome o;
  for (const auto& wp : e2e_worlds()) {
    const World& w = *wp;
    const auto& c = w.c;
    std::size_t wrong = 0;
    const __int128 bound = static_cast<__int128>(1) << c.tau;
    const std::int64_t entry = std::int64_t{1} << c.nu;
    for (int axis = 0; axis < 2; ++axis) {
      const auto& a = axis ? c.a_nw : c.a_ne;
      const auto& b = axis ? c.b_nw : c.b_ne;
      for (Eigen::Index j = 0; j < a.rows(); ++j)
        for (Eigen::Index k = 0; k < b.rows(); ++k) {
          __int128 prod = 0;
          for (Eigen::Index i = 0; i < a.cols(); ++i) {
            if (std::abs(a(j, i)) >= entry || std::abs(b(k, i)) >= entry) ++wrong;
            prod += static_cast<__int128>(a(j, i)) * b(k, i);
          }
          if (prod > bound || prod < -bound) ++wrong;
          if (j == k) continue;
          std::uint8_t bit = axis ? w.m.bit_nw(j, k) : w.m.bit_ne(j, k);
          if ((bit == 1) != (prod > 0) || prod == 0) ++wrong;
        }
    }
    if (wrong) o.fail(w.label + ": " + std::to_string(wrong) + " violations");
    if (w.label == "grid 10x10 unit") {
      double f = signfactor::compression_factor(100, c.d, c.nu);
      if (!(c.d <= 16 && f > 0)) o.fail("10x10 d=" + std::to_string(c.d));
      if (o.pass) o.detail << "10x10: d=" << c.d << " nu=" << c.nu << " factor=" << f << "; ";
    }
  }
  struct Row {
    double n, d, nu, printed;
  };
  for (Row r : {Row{1830, 12, 10, 7.63}, Row{2490, 14, 10, 8.89}, Row{4993, 19, 12, 10.95}, Row{7010, 26, 12, 11.23}}) {
    double f = signfactor::compression_factor(r.n, r.d, r.nu);
    if (std::abs(f - r.printed) > 0.01) o.fail("factor " + std::to_string(f) + " vs " + std::to_string(r.printed));
  }
  if (o.pass) o.detail << e2e_worlds().size() << " graphs exact; 4 reference factors within 0.01";
  return o;
}

// 3. Analytic gradient and loss bound.
Outcome optimizer() {
  Outcome o;
  crypto::Prng rng = crypto::Prng::from_seed(3);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng.next_u64() >> 11) / 9007199254740992.0;
  };
  double worst = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const int n = 6, d = 3;
    signfactor::RealMatrix signs(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) signs(j, k) = rng.uniform(2) ? 1.0 : -1.0;
    auto m = signfactor::SignMatrix::from_signs(signs, true);
    signfactor::RealMatrix a(n, d), b(n, d);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < d; ++i) {
        a(j, i) = uniform(-1.5, 1.5);
        b(j, i) = uniform(-1.5, 1.5);
      }
    auto [ga, gb] = signfactor::objective_grad(a, b, m);
    const double h = 1e-6;
    double num = 0, den = 0;
    for (int which = 0; which < 2; ++which) {
      signfactor::RealMatrix& x = which ? b : a;
      const signfactor::RealMatrix& g = which ? gb : ga;
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < d; ++i) {
          double keep = x(j, i);
          x(j, i) = keep + h;
          double up = signfactor::objective(a, b, m);
          x(j, i) = keep - h;
          double dn = signfactor::objective(a, b, m);
          x(j, i) = keep;
          double fd = (up - dn) / (2 * h);
          num += (g(j, i) - fd) * (g(j, i) - fd);
          den += fd * fd;
        }
    }
    double rel = std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
    worst = std::max(worst, rel);
  }
  if (worst > 1e-5) o.fail("gradient relative error " + std::to_string(worst));
  std::size_t below = 0;
  for (int i = 0; i < 100000; ++i) {
    double x = uniform(-4, 4), t = rng.uniform(2) ? 1.0 : -1.0;
    double zero_one = x * t <= 0 ? 1.0 : 0.0;
    if (signfactor::huber_loss(x, t) < zero_one) ++below;
  }
  if (below) o.fail(std::to_string(below) + " samples with loss below 0-1");
  if (o.pass) o.detail << "worst gradient relative error " << worst << "; 1e5 loss samples dominate 0-1";
  return o;
}

// 4. Cryptographic building blocks against plain references.
Outcome crypto_oracles() {
  Outcome o;
  crypto::Prng rng = crypto::Prng::from_seed(4);

  {
    gc::NeighborParams np;
    np.n = 37;
    field::Field f(np.p);
    const gc::BooleanCircuit c = gc::build_neighbor_circuit(np);
    std::size_t mismatches = 0, valid = 0;
    auto axis_z = [&](field::Elem gamma, field::Elem delta) {
      // Half the draws land near the acceptance window.
      if (rng.uniform(2)) return f.random(rng);
      auto span = (std::int64_t{1} << np.tau) + 4;
      std::int64_t w = static_cast<std::int64_t>(rng.uniform(2 * span + 1)) - span;
      return f.mul(f.sub(f.from_signed(w), delta), f.inv(gamma));
    };
    for (int i = 0; i < 500; ++i) {
      gc::NeighborInputs in;
      in.gamma_ne = f.random_nonzero(rng);
      in.delta_ne = f.random(rng);
      in.gamma_nw = f.random_nonzero(rng);
      in.delta_nw = f.random(rng);
      in.z_ne = axis_z(in.gamma_ne, in.delta_ne);
      in.z_nw = axis_z(in.gamma_nw, in.delta_nw);
      in.k_ne0 = rng.key();
      in.k_ne1 = rng.key();
      in.k_nw0 = rng.key();
      in.k_nw1 = rng.key();
      in.s = static_cast<std::uint32_t>(rng.uniform(np.n));
      in.t = rng.uniform(8) ? static_cast<std::uint32_t>(rng.uniform(np.n)) : in.s;
      auto [g, keys] = gc::garble(c, rng);
      auto bits = gc::eval(c, g, gc::encode(keys, gc::pack_neighbor_inputs(np, in)));
      gc::NeighborOutput want = gc::plain_neighbor_eval(np, in);
      if (!bits || gc::unpack_neighbor_outputs(*bits) != want) ++mismatches;
      valid += want.valid;
    }
    if (mismatches) o.fail(std::to_string(mismatches) + " circuit mismatches");
    if (valid < 50 || valid > 450) o.fail("circuit inputs poorly spread: " + std::to_string(valid) + " valid");
    if (o.pass) o.detail << "500 circuits (" << valid << " non-bottom); ";
  }

  {
    const auto& keys = *keys_512();
    std::size_t bad = 0, total = 0;
    for (std::uint32_t n : {1u, 2u, 5u, 8u, 9u, 27u, 28u, 63u, 64u}) {
      auto g = pir::PirGeometry::make(n, 24, keys.pk.bits);
      std::vector<Bytes> recs(n);
      for (auto& r : recs) r = rng.bytes(24);
      pir::PirDatabase db(g, recs);
      for (std::uint32_t i = 0; i < n; ++i) {
        auto q = pir::decode_query(pir::encode_query(pir::pir_query(i, g, keys, rng), keys.pk), g);
        auto resp = pir::decode_response(pir::encode_response(pir::pir_answer(db, q, keys.pk), keys.pk), g);
        if (pir::pir_decode(resp, g, keys) != recs[i]) ++bad;
        ++total;
      }
    }
    if (bad) o.fail(std::to_string(bad) + " PIR retrievals wrong");
    if (o.pass) o.detail << total << " PIR retrievals; ";
  }

  {
    std::size_t bad = 0, total = 0;
    for (std::uint32_t n = 1; n <= 16; ++n)
      for (std::uint32_t choice = 0; choice < n; ++choice) {
        ot::OtContext ctx{rng.key(), choice};
        std::vector<std::vector<Bytes>> recs(1);
        for (std::uint32_t j = 0; j < n; ++j) recs[0].push_back(rng.bytes(40));
        auto [req, secret] = ot::ot_receiver_request(ctx, {choice}, n, rng);
        auto resp = ot::decode_response(
            ot::encode_response(ot::ot_sender_respond(ctx, recs, ot::decode_request(ot::encode_request(req)), rng)));
        auto got = ot::ot_receiver_finish(resp, secret);
        if (got.size() != 1 || got[0] != recs[0][choice]) ++bad;
        for (std::uint32_t j = 0; j < n; ++j)
          if (j != choice && ot::ot_receiver_try(resp, secret, 0, j)) ++bad;
        ++total;
      }
    if (bad) o.fail(std::to_string(bad) + " OT transfers wrong");
    if (o.pass) o.detail << total << " OT transfers; ";
  }

  {
    std::size_t bad = 0;
    field::Field f;
    for (int i = 0; i < 1000; ++i) {
      std::size_t d = 1 + rng.uniform(16);
      std::vector<field::Elem> x(d), y(d);
      for (auto& v : x) v = f.random(rng);
      for (auto& v : y) v = f.random(rng);
      field::Elem alpha = f.random_nonzero(rng), beta = f.random(rng);
      auto r = field::random_affine(f, d, rng);
      auto [src, dst] = field::encode_pair(f, x, y, alpha, beta, r);
      unsigned __int128 ip = 0;
      for (std::size_t k = 0; k < d; ++k) ip = (ip + static_cast<unsigned __int128>(x[k]) * y[k]) % f.p();
      auto want = static_cast<field::Elem>((static_cast<unsigned __int128>(alpha) * ip + beta) % f.p());
      if (field::eval_affine(f, src, dst) != want) ++bad;
    }
    field::Field small(31);
    std::size_t cases = 0;
    for (field::Elem x = 0; x < 31; ++x)
      for (field::Elem y = 0; y < 31; ++y)
        for (field::Elem alpha = 1; alpha < 31; ++alpha)
          for (field::Elem beta = 0; beta < 31; ++beta) {
            auto r = field::random_affine(small, 1, rng);
            std::vector<field::Elem> xv{x}, yv{y};
            auto [src, dst] = field::encode_pair(small, xv, yv, alpha, beta, r);
            if (field::eval_affine(small, src, dst) != (alpha * x * y + beta) % 31) ++bad;
            ++cases;
          }
    if (bad) o.fail(std::to_string(bad) + " affine evaluations wrong");
    if (o.pass) o.detail << "1000 affine instances and " << cases << " exhaustive over p=31";
  }
  return o;
}

std::shared_ptr<const protocol::ServerData> toy_path_data() {
  protocol::ServerConfig cfg;
  cfg.p = 8191;
  cfg.allow_toy_field = true;
  auto g = roadgraph::preprocess(roadgraph::synth_grid(3, 1));
  auto m = roadgraph::all_pairs_next_hop(g);
  return protocol::make_server_data(g, signfactor::compress_routing(m, {}), cfg);
}

// 5. Cheating acceptance rates on a toy field.
Outcome cheat_bound() {
  Outcome o;
  auto data = toy_path_data();
  if (data->params.tau != 4) o.fail("tau=" + std::to_string(data->params.tau));
  const double trials = 1e5, p = 32.0 / 8191;
  auto t0 = Clock::now();
  auto single = protocol::measure_cheat_rate(*data, 0, 2, true, false, 100000, 51);
  auto dual = protocol::measure_cheat_rate(*data, 0, 2, true, true, 100000, 52);
  double elapsed = seconds_since(t0);
  auto sigmas = [&](double hits, double q) { return (hits / trials - q) / std::sqrt(q * (1 - q) / trials); };
  double z1 = sigmas(static_cast<double>(single.accepted), p), z2 = sigmas(static_cast<double>(dual.accepted), p * p);
  if (!privnav::testing::within_sigma(static_cast<double>(single.accepted), trials, p))
    o.fail("single axis " + std::to_string(single.accepted) + " accepted");
  if (!privnav::testing::within_sigma(static_cast<double>(dual.accepted), trials, p * p))
    o.fail("dual axis " + std::to_string(dual.accepted) + " accepted");
  if (elapsed >= 120) o.fail("took " + std::to_string(elapsed) + " s");
  if (o.pass)
    o.detail << "single " << single.accepted << "/1e5 (" << z1 << " sigma), dual " << dual.accepted << "/1e5 ("
             << z2 << " sigma), " << elapsed << " s";
  return o;
}

// 6. Scripted malicious clients open nothing off their walk.
Outcome consistency() {
  Outcome o;
  auto w = make_world("grid 3x3", roadgraph::synth_grid(3, 3));
  for (auto s : {protocol::CheatStrategy::kOffPathPir, protocol::CheatStrategy::kStaleKey,
                 protocol::CheatStrategy::kWrongDestination}) {
    auto st = protocol::run_cheating_client(w->data, s, 100, 60 + static_cast<int>(s), keys_512());
    if (st.trials != 100 || st.cheating_rounds == 0 || st.off_path_decryptions != 0)
      o.fail(std::string(protocol::strategy_name(s)) + ": " + std::to_string(st.off_path_decryptions) +
             " off-path decryptions in " + std::to_string(st.cheating_rounds) + " cheating rounds");
    else
      o.detail << protocol::strategy_name(s) << " 0 of " << st.cheating_rounds << " cheating rounds; ";
  }
  return o;
}

// 7. Request tags and sizes do not depend on the client's inputs.
Outcome server_view() {
  Outcome o;
  auto w = make_world("grid 4x4", roadgraph::synth_grid(4, 4));
  crypto::Prng rng = crypto::Prng::from_seed(7);
  std::optional<std::vector<std::pair<protocol::Tag, std::size_t>>> first;
  std::size_t differing = 0;
  for (int i = 0; i < 20; ++i) {
    auto s = static_cast<std::uint32_t>(rng.uniform(16)), t = static_cast<std::uint32_t>(rng.uniform(16));
    if (i == 0) t = s;
    protocol::ServerSession server(w->data, crypto::Prng::from_seed(700 + i));
    protocol::DirectTransport tr(server);
    protocol::ClientConfig cc;
    cc.s = s;
    cc.t = t;
    protocol::ClientSession client(cc, crypto::Prng::from_seed(800 + i));
    client.use_paillier_keys(keys_512());
    client.run(tr);
    if (!first)
      first = server.received();
    else if (server.received() != *first)
      ++differing;
  }
  if (differing) o.fail(std::to_string(differing) + " of 20 transcripts differ");
  if (o.pass) o.detail << "20 transcripts of " << first->size() << " requests identical";
  return o;
}

// 8. PIR traffic grows with the cube root of n.
Outcome pir_scaling() {
  Outcome o;
  const auto& keys = *keys_512();
  crypto::Prng rng = crypto::Prng::from_seed(8);
  std::vector<double> lx, ly;
  for (std::uint32_t n : {64u, 512u, 4096u}) {
    auto g = pir::PirGeometry::make(n, 32, keys.pk.bits);
    std::vector<Bytes> recs(n);
    for (auto& r : recs) r = rng.bytes(32);
    pir::PirDatabase db(g, recs);
    std::uint32_t idx = static_cast<std::uint32_t>(rng.uniform(n));
    Bytes q = pir::encode_query(pir::pir_query(idx, g, keys, rng), keys.pk);
    auto resp = pir::pir_answer(db, pir::decode_query(q, g), keys.pk);
    Bytes a = pir::encode_response(resp, keys.pk);
    if (pir::pir_decode(resp, g, keys) != recs[idx]) o.fail("n=" + std::to_string(n) + " retrieval wrong");
    double bytes = static_cast<double>(q.size() + a.size());
    lx.push_back(std::log(n));
    ly.push_back(std::log(bytes));
    o.detail << "n=" << n << ": " << bytes << " B; ";
  }
  double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3, sxy = 0, sxx = 0;
  for (int i = 0; i < 3; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  double slope = sxy / sxx;
  if (std::abs(slope - 1.0 / 3) > 0.15) o.fail("slope " + std::to_string(slope));
  if (o.pass) o.detail << "slope " << slope;
  return o;
}

// 9. Phase breakdown of one round with production-size keys.
Outcome timing() {
  Outcome o;
  protocol::ServerConfig cfg;
  cfg.delivery = protocol::Delivery::kInline;
  auto t0 = Clock::now();
  auto w = make_world("grid 20x20", roadgraph::synth_grid(20, 20), cfg);
  double build = seconds_since(t0);
  crypto::Prng rng = crypto::Prng::from_seed(9);
  auto keys = std::make_shared<const pir::PaillierKeypair>(pir::paillier_keygen(1024, rng));
  protocol::ServerSession server(w->data, crypto::Prng::from_seed(90));
  protocol::DirectTransport tr(server);
  protocol::ClientConfig cc;
  cc.s = 0;
  cc.t = static_cast<std::uint32_t>(w->g.n() - 1);
  protocol::ClientSession client(cc, crypto::Prng::from_seed(91));
  client.use_paillier_keys(keys);
  client.setup(tr);
  protocol::ServerPhaseTimes before = server.times();
  auto r0 = Clock::now();
  client.run_round(tr);
  double wall = seconds_since(r0);
  protocol::ServerPhaseTimes after = server.times();
  double pir = after.pir - before.pir, gcs = after.gc - before.gc, prep = after.prep - before.prep,
         ot = after.ot - before.ot;
  auto want = protocol::ideal_path(w->g, w->m, cc.s, cc.t, w->data->params.rounds);
  if (client.path().empty() || client.path()[0] != want[0]) o.fail("first hop wrong");
  if (!(pir > gcs && pir > prep && pir > ot)) o.fail("PIR is not the largest server phase");
  char buf[256];
  std::snprintf(buf, sizeof buf, "n=%zu d=%u; round %.2f s; server pir %.3f gc %.3f prep %.3f ot %.3f s; setup took %.0f s",
                w->g.n(), w->data->params.d, wall, pir, gcs, prep, ot, build);
  o.detail << buf;
  return o;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {"end-to-end correctness", end_to_end},  {"compression soundness", compression},
      {"optimizer validity", optimizer},       {"crypto oracle equivalence", crypto_oracles},
      {"statistical abort bound", cheat_bound}, {"consistency enforcement", consistency},
      {"server-view uniformity", server_view}, {"PIR scaling", pir_scaling},
      {"timing sanity", timing},
  };
  std::set<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    int id = static_cast<int>(i) + 1;
    if (!chosen.empty() && !chosen.count(id)) continue;
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = all[i].run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::printf("%s [%d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, all[i].name, o.detail.str().c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
