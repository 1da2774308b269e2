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
#include <string_view>
#include <vector>

namespace privnav::gc {

enum class GateType : std::uint8_t { kXor = 0, kAnd = 1 };

struct Gate {
  GateType type;
  std::uint32_t in0, in1;
};

struct WireGroup {
  std::string name;
  std::uint32_t first;  // index into inputs (or outputs)
  std::uint32_t width;
};

// Wire 0 carries constant 1, wires 1..num_inputs are inputs, and gate i
// drives wire 1 + num_inputs + i. NOT x is XOR(x, wire 0).
class BooleanCircuit {
 public:
  static constexpr std::uint32_t kOneWire = 0;

  std::uint32_t num_inputs = 0;
  std::vector<Gate> gates;
  std::vector<std::uint32_t> outputs;  // wire ids
  std::vector<WireGroup> input_groups;
  std::vector<WireGroup> output_groups;

  std::uint32_t input_wire(std::uint32_t i) const { return 1 + i; }
  std::uint32_t gate_wire(std::size_t g) const { return 1 + num_inputs + static_cast<std::uint32_t>(g); }
  std::uint32_t num_wires() const { return 1 + num_inputs + static_cast<std::uint32_t>(gates.size()); }
  std::size_t and_count() const;
  std::size_t xor_count() const { return gates.size() - and_count(); }

  const WireGroup& input_group(std::string_view name) const;
  const WireGroup& output_group(std::string_view name) const;

  // Checks topological order and wire ranges; throws InputError.
  void validate() const;
  // Plain evaluation, one byte (0/1) per input bit.
  std::vector<std::uint8_t> evaluate(const std::vector<std::uint8_t>& inputs) const;
};

// Gate-level builder with constant folding and trivial-identity
// simplification, so constant operands never cost gates.
class CircuitBuilder {
 public:
  using Wire = std::uint32_t;
  using Bits = std::vector<Wire>;  // LSB first

  static constexpr Wire kZero = 0xfffffffeu;
  static constexpr Wire kOne = BooleanCircuit::kOneWire;

  Bits input(std::string name, std::uint32_t width);
  void output(std::string name, const Bits& bits);

  Wire constant(bool v) const { return v ? kOne : kZero; }
  Bits constant(std::uint64_t v, std::uint32_t width) const;

  Wire XOR(Wire a, Wire b);
  Wire AND(Wire a, Wire b);
  Wire NOT(Wire a) { return XOR(a, kOne); }
  Wire OR(Wire a, Wire b);
  // sel ? a : b
  Wire MUX(Wire sel, Wire a, Wire b);

  Bits XOR(const Bits& a, const Bits& b);
  Bits AND(Wire s, const Bits& a);
  Bits MUX(Wire sel, const Bits& a, const Bits& b);

  // Ripple-carry sum, width max(|a|,|b|) + 1.
  Bits add(const Bits& a, const Bits& b);
  // Schoolbook product, width |a| + |b|.
  Bits multiply(const Bits& a, const Bits& b);
  // a > c for an unsigned constant c.
  Wire greater_than(const Bits& a, std::uint64_t c);
  Wire less_equal(const Bits& a, std::uint64_t c) { return NOT(greater_than(a, c)); }
  Wire greater_equal(const Bits& a, std::uint64_t c);
  Wire any(const Bits& a);
  Wire all(const Bits& a);
  Wire equal(const Bits& a, const Bits& b);

  BooleanCircuit finish();

 private:
  Wire gate(GateType t, Wire a, Wire b);
  Wire materialise(Wire w);

  std::uint32_t num_inputs_ = 0;
  std::vector<Gate> gates_;  // wire ids relative to a temporary numbering
  std::vector<WireGroup> input_groups_, output_groups_;
  std::vector<Wire> outputs_;
  bool inputs_closed_ = false;
};

}  // namespace privnav::gc
