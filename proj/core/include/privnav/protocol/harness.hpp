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
#include <memory>

#include "privnav/pir/paillier.hpp"
#include "privnav/protocol/round.hpp"

namespace privnav::protocol {

struct CheatStats {
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;  // circuit output was not bottom
  double rate() const { return trials ? static_cast<double>(accepted) / static_cast<double>(trials) : 0.0; }
};

// Runs single rounds with ideal retrieval and transfer, replacing the
// selected z values by uniform field elements before evaluation.
CheatStats measure_cheat_rate(const ServerData& data, std::uint32_t s, std::uint32_t t, bool corrupt_ne,
                              bool corrupt_nw, std::uint64_t trials, std::uint64_t seed);

enum class CheatStrategy {
  kOffPathPir,        // retrieves a source record other than the current node
  kStaleKey,          // replays an earlier round's source key
  kWrongDestination,  // switches the destination record mid-route
};

const char* strategy_name(CheatStrategy s);

struct ConsistencyStats {
  std::uint64_t trials = 0;
  std::uint64_t cheating_rounds = 0;
  std::uint64_t off_path_decryptions = 0;  // records opened that the honest walk never opens
};

// Full sessions over the in-process transport with a scripted deviation at a
// random round of each trial.
ConsistencyStats run_cheating_client(std::shared_ptr<const ServerData> data, CheatStrategy strategy,
                                     std::uint64_t trials, std::uint64_t seed,
                                     std::shared_ptr<const pir::PaillierKeypair> keys);

}  // namespace privnav::protocol
