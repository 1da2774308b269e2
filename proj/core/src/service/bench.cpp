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

#include "privnav/service/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "privnav/service/wire.hpp"

namespace privnav::service {

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double v = 0;
    for (double x : xs) v += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(v / static_cast<double>(xs.size() - 1));
  }
  return s;
}

Summary BenchReport::stat(double RoundSample::*field) const {
  std::vector<double> xs;
  for (const auto& r : rounds) xs.push_back(r.*field);
  return summarize(xs);
}

Summary BenchReport::stat(std::uint64_t RoundSample::*field) const {
  std::vector<double> xs;
  for (const auto& r : rounds) xs.push_back(static_cast<double>(r.*field));
  return summarize(xs);
}

void BenchReport::merge(const BenchReport& o) {
  rounds.insert(rounds.end(), o.rounds.begin(), o.rounds.end());
  keygen += o.keygen;
  setup += o.setup;
  total += o.total;
  setup_up += o.setup_up;
  setup_down += o.setup_down;
  offline_bytes += o.offline_bytes;
  server_prep += o.server_prep;
  server_gc += o.server_gc;
  server_pir += o.server_pir;
  server_ot += o.server_ot;
}

std::string BenchReport::table() const {
  std::ostringstream out;
  char line[160];
  out << "benchmark " << (label.empty() ? "-" : label) << ": n=" << n << " R=" << rounds_per_session
      << " paillier=" << key_bits << " rounds measured=" << rounds.size() << "\n";
  auto row = [&](const char* name, Summary s, const char* unit, double scale) {
    std::snprintf(line, sizeof(line), "  %-14s %12.3f %s  (sd %.3f)\n", name, s.mean * scale, unit, s.stddev * scale);
    out << line;
  };
  row("round wall", stat(&RoundSample::wall), "ms", 1e3);
  row("  pir", stat(&RoundSample::pir), "ms", 1e3);
  row("  ot", stat(&RoundSample::ot), "ms", 1e3);
  row("  gc", stat(&RoundSample::gc), "ms", 1e3);
  row("upload", stat(&RoundSample::up), "KiB", 1.0 / 1024);
  row("download", stat(&RoundSample::down), "KiB", 1.0 / 1024);
  std::snprintf(line, sizeof(line), "  %-14s %12.3f s\n  %-14s %12.3f s\n  %-14s %12.3f s\n", "keygen", keygen,
                "setup", setup, "total", total);
  out << line;
  std::snprintf(line, sizeof(line), "  %-14s %12.1f KiB up, %.1f KiB down\n", "setup bytes", setup_up / 1024.0,
                setup_down / 1024.0);
  out << line;
  if (offline_bytes) {
    std::snprintf(line, sizeof(line), "  %-14s %12.1f KiB\n", "offline gc", offline_bytes / 1024.0);
    out << line;
  }
  if (server_pir + server_gc + server_ot + server_prep > 0) {
    std::snprintf(line, sizeof(line), "  server         prep %.3f s, gc %.3f s, pir %.3f s, ot %.3f s\n", server_prep,
                  server_gc, server_pir, server_ot);
    out << line;
  }
  return out.str();
}

std::string BenchReport::json() const {
  nlohmann::json j;
  j["label"] = label;
  j["n"] = n;
  j["rounds_per_session"] = rounds_per_session;
  j["key_bits"] = key_bits;
  j["keygen_s"] = keygen;
  j["setup_s"] = setup;
  j["total_s"] = total;
  j["setup_bytes"] = {{"up", setup_up}, {"down", setup_down}};
  j["offline_circuit_bytes"] = offline_bytes;
  j["server_s"] = {{"prep", server_prep}, {"gc", server_gc}, {"pir", server_pir}, {"ot", server_ot}};
  auto summary = [](Summary s) { return nlohmann::json{{"mean", s.mean}, {"stddev", s.stddev}}; };
  j["round"] = {{"wall_s", summary(stat(&RoundSample::wall))}, {"pir_s", summary(stat(&RoundSample::pir))},
                {"ot_s", summary(stat(&RoundSample::ot))},     {"gc_s", summary(stat(&RoundSample::gc))},
                {"up_bytes", summary(stat(&RoundSample::up))}, {"down_bytes", summary(stat(&RoundSample::down))}};
  auto& per = j["rounds"] = nlohmann::json::array();
  for (const auto& r : rounds)
    per.push_back({{"wall_s", r.wall}, {"pir_s", r.pir}, {"ot_s", r.ot}, {"gc_s", r.gc}, {"up", r.up}, {"down", r.down}});
  return j.dump(2);
}

Navigation navigate(protocol::ClientSession& client, protocol::Transport& transport) {
  CountingTransport counted(transport);
  Navigation nav;
  auto t0 = std::chrono::steady_clock::now();
  client.setup(counted);
  nav.report.setup_up = counted.bytes_up();
  nav.report.setup_down = counted.bytes_down();
  for (const auto& e : counted.log())
    if (e.request == protocol::Tag::kGcMaterial) nav.report.offline_bytes += e.down;
  const auto& p = client.params();
  while (client.rounds_done() < p.rounds) {
    std::uint64_t up = counted.bytes_up(), down = counted.bytes_down();
    client.run_round(counted);
    const auto& st = client.stats().rounds.back();
    nav.report.rounds.push_back(
        RoundSample{st.total, st.pir, st.ot, st.gc, counted.bytes_up() - up, counted.bytes_down() - down});
  }
  nav.report.total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  nav.report.keygen = client.stats().keygen;
  nav.report.setup = client.stats().setup;
  nav.report.n = p.n;
  nav.report.key_bits = client.paillier_bits();
  nav.report.rounds_per_session = p.rounds;
  nav.path = client.path();
  return nav;
}

}  // namespace privnav::service
