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

#include <array>
#include <cstdint>
#include <vector>

#include "privnav/common/bytes.hpp"
#include "privnav/field/field.hpp"
#include "privnav/gc/neighbor.hpp"
#include "privnav/roadgraph/roadgraph.hpp"

namespace privnav::protocol {

inline constexpr std::uint32_t kProtocolVersion = 1;

// Offline ships all R garbled circuits during setup; inline sends each with
// its round.
enum class Delivery : std::uint8_t { kOffline = 0, kInline = 1 };

using Topology = std::vector<std::array<std::uint32_t, 4>>;

// Everything both parties know before the first round.
struct ProtocolParams {
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  unsigned tau = 0;
  std::uint32_t rounds = 0;
  field::Elem p = field::kDefaultPrime;
  unsigned lambda = 128;  // computational security, in bits
  unsigned ell = 128;     // symmetric key bits
  unsigned rho = 128;     // PRF key bits
  Delivery delivery = Delivery::kOffline;
  Topology topology;

  int mu() const;
  gc::NeighborParams neighbor_params() const;
  std::uint32_t neighbor(std::uint32_t u, roadgraph::Direction d) const;
  // Throws InputError on inconsistent values or a toy field without
  // allow_toy_field.
  void validate(bool allow_toy_field) const;
  bool operator==(const ProtocolParams&) const = default;
};

void write_params(ByteWriter& w, const ProtocolParams& p);
ProtocolParams read_params(ByteReader& r);

}  // namespace privnav::protocol
