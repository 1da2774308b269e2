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

#include "privnav/gc/neighbor.hpp"

#include "privnav/common/error.hpp"

namespace privnav::gc {

unsigned NeighborParams::field_bits() const { return field::Field(p).bits(); }

unsigned NeighborParams::node_bits() const {
  unsigned b = 0;
  while ((std::uint64_t{1} << b) < n) ++b;
  return b == 0 ? 1 : b;
}

void NeighborParams::validate() const {
  if (n < 1) throw InputError("neighbor circuit: n must be positive");
  if (tau + 2 >= field_bits()) throw InputError("neighbor circuit: tau too large for p");
  if (rho != 128 || ell != 128) throw InputError("neighbor circuit: key lengths must be 128 bits");
}

NeighborOutput plain_neighbor_eval(const NeighborParams& params, const NeighborInputs& in) {
  field::Field f(params.p);
  const std::uint64_t node_mask = (std::uint64_t{1} << params.node_bits()) - 1;
  const std::uint64_t z_mask = f.p();  // inputs are k-bit strings
  const std::int64_t bound = std::int64_t{1} << params.tau;
  auto axis = [&](field::Elem z, field::Elem g, field::Elem d, bool& valid, bool& b) {
    field::Elem w = f.add(f.reduce(static_cast<unsigned __int128>(g & z_mask) * (z & z_mask)), f.reduce(d & z_mask));
    std::int64_t c = f.centered(w);
    valid = c >= -bound && c <= bound;
    b = c > 0;
  };
  bool v_ne, v_nw, b_ne, b_nw;
  axis(in.z_ne, in.gamma_ne, in.delta_ne, v_ne, b_ne);
  axis(in.z_nw, in.gamma_nw, in.delta_nw, v_nw, b_nw);
  NeighborOutput out;
  if ((in.s & node_mask) == (in.t & node_mask) || !v_ne || !v_nw) return out;
  out.valid = true;
  out.b_ne = b_ne;
  out.b_nw = b_nw;
  out.k_ne = b_ne ? in.k_ne1 : in.k_ne0;
  out.k_nw = b_nw ? in.k_nw1 : in.k_nw0;
  return out;
}

namespace {

using Bits = CircuitBuilder::Bits;
using Wire = CircuitBuilder::Wire;

struct Axis {
  Wire valid, b;
};

// w = (gamma * z + delta) mod p for p = 2^k - 1, then the interval and
// sign tests on its centred value.
Axis build_axis(CircuitBuilder& cb, const Bits& z, const Bits& gamma, const Bits& delta, unsigned k,
                std::uint64_t p, unsigned tau) {
  Bits prod = cb.multiply(gamma, z);  // 2k bits
  Bits lo(prod.begin(), prod.begin() + k), hi(prod.begin() + k, prod.end());
  Bits u = cb.add(cb.add(lo, hi), delta);  // < 3 * 2^k, k + 2 bits
  u.resize(k + 2);
  Bits u_lo(u.begin(), u.begin() + k), u_hi(u.begin() + k, u.end());
  Bits v = cb.add(u_lo, u_hi);  // < 2^k + 3
  v.resize(k + 1);
  // v >= p iff the top bit is set or the low k bits are all ones; then
  // v - p equals the low k bits of v + 1.
  Bits v_lo(v.begin(), v.begin() + k);
  Wire ge_p = cb.OR(v[k], cb.all(v_lo));
  Bits inc = cb.add(v_lo, cb.constant(1, 1));
  inc.resize(k);
  Bits w = cb.MUX(ge_p, inc, v_lo);
  const std::uint64_t bound = std::uint64_t{1} << tau;
  Wire in_low = cb.less_equal(w, bound);
  Wire in_high = cb.greater_equal(w, p - bound);
  Axis a;
  a.valid = cb.OR(in_low, in_high);
  a.b = cb.AND(in_low, cb.any(w));
  return a;
}

}  // namespace

BooleanCircuit build_neighbor_circuit(const NeighborParams& params) {
  params.validate();
  const unsigned k = params.field_bits();
  const unsigned nb = params.node_bits();
  CircuitBuilder cb;
  Bits z_ne = cb.input("z_ne", k), g_ne = cb.input("gamma_ne", k), d_ne = cb.input("delta_ne", k);
  Bits z_nw = cb.input("z_nw", k), g_nw = cb.input("gamma_nw", k), d_nw = cb.input("delta_nw", k);
  Bits k_ne0 = cb.input("k_ne0", params.rho), k_ne1 = cb.input("k_ne1", params.rho);
  Bits k_nw0 = cb.input("k_nw0", params.rho), k_nw1 = cb.input("k_nw1", params.rho);
  Bits s = cb.input("s", nb), t = cb.input("t", nb);

  Axis ne = build_axis(cb, z_ne, g_ne, d_ne, k, params.p, params.tau);
  Axis nw = build_axis(cb, z_nw, g_nw, d_nw, k, params.p, params.tau);
  Wire valid = cb.AND(cb.NOT(cb.equal(s, t)), cb.AND(ne.valid, nw.valid));

  auto select = [&](Wire b, const Bits& k0, const Bits& k1) {
    // (b & k1) ^ (!b & k0), zeroed when invalid.
    return cb.AND(valid, cb.MUX(b, k1, k0));
  };
  cb.output("valid", {valid});
  cb.output("b_ne", {cb.AND(ne.b, valid)});
  cb.output("b_nw", {cb.AND(nw.b, valid)});
  cb.output("k_ne", select(ne.b, k_ne0, k_ne1));
  cb.output("k_nw", select(nw.b, k_nw0, k_nw1));
  return cb.finish();
}

std::vector<std::uint8_t> bits_of(std::uint64_t v, unsigned width) {
  std::vector<std::uint8_t> out(width);
  for (unsigned i = 0; i < width; ++i) out[i] = i < 64 ? (v >> i) & 1 : 0;
  return out;
}

std::vector<std::uint8_t> bits_of(const Key128& k) {
  std::vector<std::uint8_t> out(128);
  for (unsigned i = 0; i < 128; ++i) out[i] = (k[i / 8] >> (i % 8)) & 1;
  return out;
}

std::uint64_t value_of(const std::uint8_t* bits, unsigned width) {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width && i < 64; ++i) v |= static_cast<std::uint64_t>(bits[i] & 1) << i;
  return v;
}

Key128 key_of(const std::uint8_t* bits) {
  Key128 k{};
  for (unsigned i = 0; i < 128; ++i) k[i / 8] |= static_cast<std::uint8_t>((bits[i] & 1) << (i % 8));
  return k;
}

std::vector<std::uint8_t> pack_neighbor_inputs(const NeighborParams& params, const NeighborInputs& in) {
  const unsigned k = params.field_bits(), nb = params.node_bits();
  std::vector<std::uint8_t> out;
  auto put = [&](const std::vector<std::uint8_t>& b) { out.insert(out.end(), b.begin(), b.end()); };
  put(bits_of(in.z_ne, k));
  put(bits_of(in.gamma_ne, k));
  put(bits_of(in.delta_ne, k));
  put(bits_of(in.z_nw, k));
  put(bits_of(in.gamma_nw, k));
  put(bits_of(in.delta_nw, k));
  put(bits_of(in.k_ne0));
  put(bits_of(in.k_ne1));
  put(bits_of(in.k_nw0));
  put(bits_of(in.k_nw1));
  put(bits_of(in.s, nb));
  put(bits_of(in.t, nb));
  return out;
}

NeighborOutput unpack_neighbor_outputs(const std::vector<std::uint8_t>& bits) {
  if (bits.size() != 3 + 256) throw InputError("neighbor outputs: expected 259 bits");
  NeighborOutput o;
  o.valid = bits[0];
  o.b_ne = bits[1];
  o.b_nw = bits[2];
  o.k_ne = key_of(bits.data() + 3);
  o.k_nw = key_of(bits.data() + 3 + 128);
  return o;
}

}  // namespace privnav::gc
