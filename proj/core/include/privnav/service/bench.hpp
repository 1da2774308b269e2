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

#include <cstdint>
#include <string>
#include <vector>

#include "privnav/protocol/client.hpp"

namespace privnav::service {

struct RoundSample {
  double wall = 0, pir = 0, ot = 0, gc = 0;  // client-side seconds
  std::uint64_t up = 0, down = 0;            // framed bytes
};

struct Summary {
  double mean = 0, stddev = 0;
};

Summary summarize(const std::vector<double>& xs);

struct BenchReport {
  std::string label;
  std::uint32_t n = 0, rounds_per_session = 0;
  unsigned key_bits = 0;
  double keygen = 0, setup = 0, total = 0;
  std::uint64_t setup_up = 0, setup_down = 0;
  std::uint64_t offline_bytes = 0;  // circuit bundle reply, framed
  std::vector<RoundSample> rounds;
  // Filled by harnesses that own the server side.
  double server_prep = 0, server_gc = 0, server_pir = 0, server_ot = 0;

  Summary stat(double RoundSample::*field) const;
  Summary stat(std::uint64_t RoundSample::*field) const;
  // Appends another session's rounds and adds its totals.
  void merge(const BenchReport& other);
  std::string table() const;
  std::string json() const;
};

struct Navigation {
  protocol::Path path;
  BenchReport report;
};

// Setup plus all R rounds, measuring every round at the framing layer.
Navigation navigate(protocol::ClientSession& client, protocol::Transport& transport);

}  // namespace privnav::service
