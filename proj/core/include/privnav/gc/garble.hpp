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
#include <optional>
#include <vector>

#include "privnav/common/bytes.hpp"
#include "privnav/crypto/prng.hpp"
#include "privnav/gc/circuit.hpp"

#ifndef PRIVNAV_GC_LABEL_BITS
#define PRIVNAV_GC_LABEL_BITS 128
#endif

namespace privnav::gc {

inline constexpr unsigned kLabelBits = PRIVNAV_GC_LABEL_BITS;
static_assert(kLabelBits == 128 || kLabelBits == 80, "labels are 128 or 80 bits");
inline constexpr std::size_t kLabelBytes = kLabelBits / 8;

struct Label {
  std::uint64_t lo = 0, hi = 0;

  bool lsb() const { return lo & 1; }
  Label operator^(const Label& o) const { return {lo ^ o.lo, hi ^ o.hi}; }
  Label& operator^=(const Label& o) {
    lo ^= o.lo;
    hi ^= o.hi;
    return *this;
  }
  bool operator==(const Label&) const = default;

  void write(ByteWriter& w) const;
  static Label read(ByteReader& r);
};

// Garbler-side secrets: the free-XOR offset and the zero labels of inputs.
struct Keyset {
  Label delta;
  std::vector<Label> zero;  // per input bit

  Label label(std::uint32_t input, bool bit) const { return bit ? zero[input] ^ delta : zero[input]; }
};

// Material sent to the evaluator. Gate topology comes from the public circuit.
struct GarbledCircuit {
  std::vector<Label> tables;                  // three rows per AND gate
  Label one;                                  // active label of the constant wire
  std::vector<std::array<Label, 2>> decode;   // per output: tags of its 0 and 1 labels

  std::size_t table_bytes() const { return tables.size() * kLabelBytes; }
};

// Free-XOR, point-and-permute, three-row reduction. Gate hashes use
// fixed-key AES with the gate index as tweak.
std::pair<GarbledCircuit, Keyset> garble(const BooleanCircuit& c, crypto::Prng& rng);

// One label per input bit; throws InputError on a size mismatch.
std::vector<Label> encode(const Keyset& keys, const std::vector<std::uint8_t>& bits);
// Labels for a contiguous input group.
std::vector<Label> encode_group(const Keyset& keys, const WireGroup& group, const std::vector<std::uint8_t>& bits);

// nullopt when an output label matches neither decoding tag.
std::optional<std::vector<std::uint8_t>> eval(const BooleanCircuit& c, const GarbledCircuit& g,
                                             const std::vector<Label>& inputs);

// "PRGC", u32 record count, records, u32 label length. Records are gates
// (u8 type, u32 in0, u32 in1, rows), one constant-label record and one
// decode record per output.
Bytes serialize(const BooleanCircuit& c, const GarbledCircuit& g);
// Rejects material whose gate records differ from c. Throws DecodeError.
GarbledCircuit deserialize(const BooleanCircuit& c, ByteView data);

// Exact serialized size for circuit c.
std::size_t serialized_size(const BooleanCircuit& c);

}  // namespace privnav::gc
