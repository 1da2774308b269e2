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
#include <vector>

#include "privnav/common/bytes.hpp"
#include "privnav/field/field.hpp"
#include "privnav/gc/circuit.hpp"

namespace privnav::gc {

struct NeighborParams {
  std::uint64_t p = field::kDefaultPrime;
  unsigned tau = 20;
  std::uint32_t n = 2;
  unsigned ell = 128;  // symmetric key bits
  unsigned rho = 128;  // PRF key bits carried through the circuit

  unsigned field_bits() const;
  unsigned node_bits() const;  // max(1, ceil(log2 n))
  // Throws InputError unless tau + 2 < bit length of p and rho = 128.
  void validate() const;
};

struct NeighborInputs {
  field::Elem z_ne = 0, gamma_ne = 1, delta_ne = 0;
  field::Elem z_nw = 0, gamma_nw = 1, delta_nw = 0;
  Key128 k_ne0{}, k_ne1{}, k_nw0{}, k_nw1{};
  std::uint32_t s = 0, t = 0;
};

// valid = false encodes the bottom output; all other fields are then zero.
struct NeighborOutput {
  bool valid = false;
  bool b_ne = false, b_nw = false;
  Key128 k_ne{}, k_nw{};
  bool operator==(const NeighborOutput&) const = default;
};

// Reference semantics: per axis w = [gamma z + delta]_p in centred form;
// bottom if s = t or |w| > 2^tau on either axis; b = 1 iff w > 0; the key
// output is k^b.
NeighborOutput plain_neighbor_eval(const NeighborParams& params, const NeighborInputs& in);

// Input groups, each LSB first: z_ne gamma_ne delta_ne z_nw gamma_nw delta_nw
// k_ne0 k_ne1 k_nw0 k_nw1 s t. Outputs: valid b_ne b_nw k_ne k_nw.
BooleanCircuit build_neighbor_circuit(const NeighborParams& params);

std::vector<std::uint8_t> bits_of(std::uint64_t v, unsigned width);
std::vector<std::uint8_t> bits_of(const Key128& k);
std::uint64_t value_of(const std::uint8_t* bits, unsigned width);
Key128 key_of(const std::uint8_t* bits);

std::vector<std::uint8_t> pack_neighbor_inputs(const NeighborParams& params, const NeighborInputs& in);
NeighborOutput unpack_neighbor_outputs(const std::vector<std::uint8_t>& bits);

}  // namespace privnav::gc
