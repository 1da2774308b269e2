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

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

#include "privnav/field/field.hpp"
#include "privnav/protocol/round.hpp"
#include "privnav/service/bench.hpp"

namespace privnav::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInput = 2, kExitProtocol = 3, kExitTransport = 4 };

int exit_code_for(const std::exception& e);

struct PreprocessOptions {
  std::filesystem::path graph;
  std::filesystem::path out;        // next-hop matrices
  std::filesystem::path graph_out;  // preprocessed graph; empty means <out>.graph.json
};

struct PreprocessSummary {
  std::size_t n = 0, edges = 0, dummies = 0;
  std::uint32_t rounds = 0;
  std::filesystem::path graph_out;
};

PreprocessSummary cmd_preprocess(const PreprocessOptions& o, std::ostream& log);

struct CompressOptions {
  std::filesystem::path matrices;
  std::filesystem::path out;
  int d_min = 1, d_max = 0;
  int max_iterations = 5000;
  std::uint64_t seed = 1;
};

signfactor::CompressedRouting cmd_compress(const CompressOptions& o, std::ostream& log);

struct ServeOptions {
  std::filesystem::path graph;       // preprocessed graph
  std::filesystem::path compressed;  // PRSF file
  std::string bind = "127.0.0.1:7433";
  unsigned min_key_bits = 1024;
  field::Elem field_prime = field::kDefaultPrime;
  bool insecure_toy_field = false;
  unsigned pir_threads = 1;
  bool inline_circuits = false;
  std::uint32_t rounds = 0;
  std::size_t max_sessions = 64;
  std::uint64_t seed = 0;  // 0 seeds from the operating system
};

// Refuses a toy field unless insecure_toy_field is set.
std::shared_ptr<const protocol::ServerData> load_server_data(const ServeOptions& o);

// Serves until stop becomes true, then drains in-flight rounds.
void cmd_serve(const ServeOptions& o, std::ostream& log, const std::atomic<bool>& stop,
               const std::function<void(std::uint16_t port)>& on_listen = {});

struct NavigateOptions {
  std::string server = "127.0.0.1:7433";
  std::uint32_t s = 0, t = 0;
  unsigned key_bits = 1024;
  bool insecure_toy_field = false;
  bool json = false;
  std::uint64_t seed = 0;
};

service::Navigation cmd_navigate(const NavigateOptions& o, std::ostream& out);

struct BenchOptions {
  std::filesystem::path graph, compressed;  // both empty: synthetic grid
  std::size_t grid_width = 10, grid_height = 10;
  unsigned key_bits = 1024;
  unsigned rounds = 30;  // measured rounds after one warm-up round
  bool inline_circuits = false;
  unsigned pir_threads = 1;
  std::uint64_t seed = 1;
  bool json = false;
};

service::BenchReport cmd_bench(const BenchOptions& o, std::ostream& out);

// Multi-line rendering of a path, one round per line.
std::string format_path(const protocol::Path& path, std::uint32_t s, std::uint32_t t);

}  // namespace privnav::cli
