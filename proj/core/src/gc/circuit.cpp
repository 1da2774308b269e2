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

#include "privnav/gc/circuit.hpp"

#include <algorithm>

#include "privnav/common/error.hpp"

namespace privnav::gc {

std::size_t BooleanCircuit::and_count() const {
  return static_cast<std::size_t>(
      std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.type == GateType::kAnd; }));
}

namespace {

const WireGroup& find_group(const std::vector<WireGroup>& groups, std::string_view name) {
  for (const auto& g : groups)
    if (g.name == name) return g;
  throw InputError("no wire group named " + std::string(name));
}

}  // namespace

const WireGroup& BooleanCircuit::input_group(std::string_view name) const { return find_group(input_groups, name); }
const WireGroup& BooleanCircuit::output_group(std::string_view name) const {
  return find_group(output_groups, name);
}

void BooleanCircuit::validate() const {
  for (std::size_t i = 0; i < gates.size(); ++i) {
    std::uint32_t self = gate_wire(i);
    const Gate& g = gates[i];
    if (g.type != GateType::kXor && g.type != GateType::kAnd) throw InputError("circuit: bad gate type");
    if (g.in0 >= self || g.in1 >= self) throw InputError("circuit: gate input is not topologically earlier");
  }
  for (std::uint32_t w : outputs)
    if (w >= num_wires()) throw InputError("circuit: output wire out of range");
}

std::vector<std::uint8_t> BooleanCircuit::evaluate(const std::vector<std::uint8_t>& inputs) const {
  if (inputs.size() != num_inputs) throw InputError("circuit: wrong number of input bits");
  std::vector<std::uint8_t> v(num_wires());
  v[0] = 1;
  for (std::uint32_t i = 0; i < num_inputs; ++i) v[1 + i] = inputs[i] & 1;
  std::uint32_t w = 1 + num_inputs;
  for (const Gate& g : gates) {
    v[w++] = g.type == GateType::kXor ? (v[g.in0] ^ v[g.in1]) : (v[g.in0] & v[g.in1]);
  }
  std::vector<std::uint8_t> out(outputs.size());
  for (std::size_t i = 0; i < outputs.size(); ++i) out[i] = v[outputs[i]];
  return out;
}

CircuitBuilder::Bits CircuitBuilder::input(std::string name, std::uint32_t width) {
  if (inputs_closed_) throw InputError("circuit builder: inputs must precede gates");
  Bits bits(width);
  for (std::uint32_t i = 0; i < width; ++i) bits[i] = 1 + num_inputs_ + i;
  input_groups_.push_back({std::move(name), num_inputs_, width});
  num_inputs_ += width;
  return bits;
}

void CircuitBuilder::output(std::string name, const Bits& bits) {
  output_groups_.push_back({std::move(name), static_cast<std::uint32_t>(outputs_.size()),
                            static_cast<std::uint32_t>(bits.size())});
  for (Wire w : bits) outputs_.push_back(w);
}

CircuitBuilder::Bits CircuitBuilder::constant(std::uint64_t v, std::uint32_t width) const {
  Bits b(width);
  for (std::uint32_t i = 0; i < width; ++i) b[i] = (i < 64 && ((v >> i) & 1)) ? kOne : kZero;
  return b;
}

CircuitBuilder::Wire CircuitBuilder::gate(GateType t, Wire a, Wire b) {
  inputs_closed_ = true;
  if (a > b) std::swap(a, b);
  gates_.push_back({t, a, b});
  return 1 + num_inputs_ + static_cast<Wire>(gates_.size() - 1);
}

CircuitBuilder::Wire CircuitBuilder::XOR(Wire a, Wire b) {
  if (a == kZero) return b;
  if (b == kZero) return a;
  if (a == b) return kZero;
  if (a == kOne && b == kOne) return kZero;
  return gate(GateType::kXor, a, b);
}

CircuitBuilder::Wire CircuitBuilder::AND(Wire a, Wire b) {
  if (a == kZero || b == kZero) return kZero;
  if (a == kOne) return b;
  if (b == kOne) return a;
  if (a == b) return a;
  return gate(GateType::kAnd, a, b);
}

CircuitBuilder::Wire CircuitBuilder::OR(Wire a, Wire b) { return XOR(XOR(a, b), AND(a, b)); }

CircuitBuilder::Wire CircuitBuilder::MUX(Wire sel, Wire a, Wire b) { return XOR(b, AND(sel, XOR(a, b))); }

CircuitBuilder::Bits CircuitBuilder::XOR(const Bits& a, const Bits& b) {
  Bits out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = XOR(i < a.size() ? a[i] : kZero, i < b.size() ? b[i] : kZero);
  return out;
}

CircuitBuilder::Bits CircuitBuilder::AND(Wire s, const Bits& a) {
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = AND(s, a[i]);
  return out;
}

CircuitBuilder::Bits CircuitBuilder::MUX(Wire sel, const Bits& a, const Bits& b) {
  Bits out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = MUX(sel, i < a.size() ? a[i] : kZero, i < b.size() ? b[i] : kZero);
  return out;
}

CircuitBuilder::Bits CircuitBuilder::add(const Bits& a, const Bits& b) {
  const std::size_t w = std::max(a.size(), b.size());
  Bits out(w + 1);
  Wire carry = kZero;
  for (std::size_t i = 0; i < w; ++i) {
    Wire x = i < a.size() ? a[i] : kZero;
    Wire y = i < b.size() ? b[i] : kZero;
    Wire xc = XOR(x, carry);
    out[i] = XOR(xc, y);
    // carry' = carry ^ ((x ^ carry) & (y ^ carry)): one AND per bit.
    carry = XOR(carry, AND(xc, XOR(y, carry)));
  }
  out[w] = carry;
  return out;
}

CircuitBuilder::Bits CircuitBuilder::multiply(const Bits& a, const Bits& b) {
  Bits acc(a.size() + b.size(), kZero);
  for (std::size_t i = 0; i < b.size(); ++i) {
    Bits pp = AND(b[i], a);
    Bits window(acc.begin() + static_cast<std::ptrdiff_t>(i),
                acc.begin() + static_cast<std::ptrdiff_t>(i + a.size()));
    Bits sum = add(window, pp);
    for (std::size_t j = 0; j < sum.size() && i + j < acc.size(); ++j) acc[i + j] = sum[j];
  }
  return acc;
}

CircuitBuilder::Wire CircuitBuilder::greater_than(const Bits& a, std::uint64_t c) {
  // Bits of c above the width make a > c impossible.
  if (a.size() < 64 && (c >> a.size()) != 0) return kZero;
  Wire gt = kZero;
  for (std::size_t i = 0; i < a.size(); ++i) {
    bool ci = i < 64 && ((c >> i) & 1);
    gt = ci ? AND(a[i], gt) : OR(a[i], gt);
  }
  return gt;
}

CircuitBuilder::Wire CircuitBuilder::greater_equal(const Bits& a, std::uint64_t c) {
  return c == 0 ? kOne : greater_than(a, c - 1);
}

CircuitBuilder::Wire CircuitBuilder::any(const Bits& a) {
  Wire r = kZero;
  for (Wire w : a) r = OR(r, w);
  return r;
}

CircuitBuilder::Wire CircuitBuilder::all(const Bits& a) {
  Wire r = kOne;
  for (Wire w : a) r = AND(r, w);
  return r;
}

CircuitBuilder::Wire CircuitBuilder::equal(const Bits& a, const Bits& b) { return NOT(any(XOR(a, b))); }

CircuitBuilder::Wire CircuitBuilder::materialise(Wire w) {
  if (w != kZero) return w;
  return gate(GateType::kXor, kOne, kOne);
}

BooleanCircuit CircuitBuilder::finish() {
  for (Wire& w : outputs_) w = materialise(w);
  BooleanCircuit c;
  c.num_inputs = num_inputs_;
  c.gates = std::move(gates_);
  c.outputs = std::move(outputs_);
  c.input_groups = std::move(input_groups_);
  c.output_groups = std::move(output_groups_);
  c.validate();
  return c;
}

}  // namespace privnav::gc
