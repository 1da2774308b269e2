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

#include "privnav/gc/garble.hpp"

#include <immintrin.h>

#include "../crypto/aesni.hpp"

// std::vector<__m128i> drops the alignment attribute from the template
// argument; the allocator still aligns to 16 bytes.
#pragma GCC diagnostic ignored "-Wignored-attributes"
#include "privnav/common/error.hpp"

namespace privnav::gc {
namespace {

using Block = __m128i;

inline Block mask_block() {
  if constexpr (kLabelBits == 128) return _mm_set1_epi32(-1);
  return _mm_set_epi64x(0xffff, -1);
}

inline Block to_block(const Label& l) { return _mm_set_epi64x(static_cast<long long>(l.hi), static_cast<long long>(l.lo)); }

inline Label to_label(Block b) {
  Label l;
  l.lo = static_cast<std::uint64_t>(_mm_cvtsi128_si64(b));
  l.hi = static_cast<std::uint64_t>(_mm_extract_epi64(b, 1));
  return l;
}

// Multiplication by x in GF(2^128).
inline Block dbl(Block x) {
  Block shifted = _mm_slli_epi64(x, 1);
  Block carry = _mm_srli_epi64(x, 63);
  Block swapped = _mm_shuffle_epi32(carry, 0x4e);
  Block red = _mm_and_si128(_mm_sub_epi64(_mm_setzero_si128(), swapped), _mm_set_epi64x(1, 0x87));
  return _mm_xor_si128(shifted, red);
}

class FixedKeyHash {
 public:
  FixedKeyHash() {
    static constexpr std::uint8_t kKey[16] = {0x70, 0x72, 0x69, 0x76, 0x6e, 0x61, 0x76, 0x2d,
                                              0x67, 0x63, 0x2d, 0x66, 0x6b, 0x61, 0x65, 0x73};
    crypto::aesni::expand_key(kKey, rk_);
  }

  // H(a, b, i) = pi(K) ^ K with K = 2a ^ 4b ^ i.
  Block operator()(Block a, Block b, std::uint64_t tweak) const {
    Block k = _mm_xor_si128(_mm_xor_si128(dbl(a), dbl(dbl(b))), _mm_set_epi64x(0, static_cast<long long>(tweak)));
    return _mm_and_si128(_mm_xor_si128(crypto::aesni::encrypt(rk_, k), k), mask_block());
  }

  // Four hashes sharing one pipeline.
  void hash4(const Block a[4], const Block b[4], std::uint64_t tweak, Block out[4]) const {
    Block k[4];
    for (int j = 0; j < 4; ++j) {
      k[j] = _mm_xor_si128(_mm_xor_si128(dbl(a[j]), dbl(dbl(b[j]))), _mm_set_epi64x(0, static_cast<long long>(tweak)));
      out[j] = k[j];
    }
    crypto::aesni::encrypt4(rk_, out);
    for (int j = 0; j < 4; ++j) out[j] = _mm_and_si128(_mm_xor_si128(out[j], k[j]), mask_block());
  }

 private:
  Block rk_[11];
};

const FixedKeyHash& hasher() {
  static const FixedKeyHash h;
  return h;
}

constexpr std::uint64_t kOutputTweak = 1ull << 63;

inline bool lsb(Block b) { return _mm_cvtsi128_si64(b) & 1; }

Block random_block(crypto::Prng& rng) {
  Block b;
  rng.fill(&b, sizeof(b));
  return _mm_and_si128(b, mask_block());
}

bool equal(Block a, Block b) { return _mm_movemask_epi8(_mm_cmpeq_epi8(a, b)) == 0xffff; }

}  // namespace

void Label::write(ByteWriter& w) const {
  std::uint8_t buf[16];
  std::memcpy(buf, &lo, 8);
  std::memcpy(buf + 8, &hi, 8);
  w.raw(buf, kLabelBytes);
}

Label Label::read(ByteReader& r) {
  std::uint8_t buf[16] = {};
  r.raw(buf, kLabelBytes);
  Label l;
  std::memcpy(&l.lo, buf, 8);
  std::memcpy(&l.hi, buf + 8, 8);
  return l;
}

std::pair<GarbledCircuit, Keyset> garble(const BooleanCircuit& c, crypto::Prng& rng) {
  const FixedKeyHash& h = hasher();
  Block delta = _mm_or_si128(random_block(rng), _mm_set_epi64x(0, 1));
  std::vector<Block> w(c.num_wires());
  w[0] = random_block(rng);
  Keyset keys;
  keys.delta = to_label(delta);
  keys.zero.resize(c.num_inputs);
  for (std::uint32_t i = 0; i < c.num_inputs; ++i) {
    w[1 + i] = random_block(rng);
    keys.zero[i] = to_label(w[1 + i]);
  }
  GarbledCircuit g;
  g.one = to_label(_mm_xor_si128(w[0], delta));
  g.tables.reserve(3 * c.and_count());
  std::uint32_t wire = 1 + c.num_inputs;
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi, ++wire) {
    const Gate& gate = c.gates[gi];
    Block a0 = w[gate.in0], b0 = w[gate.in1];
    if (gate.type == GateType::kXor) {
      w[wire] = _mm_xor_si128(a0, b0);
      continue;
    }
    const bool pa = lsb(a0), pb = lsb(b0);
    Block a1 = _mm_xor_si128(a0, delta), b1 = _mm_xor_si128(b0, delta);
    // Row (i, j) is addressed by the permute bits of the active labels;
    // its real input values are (i ^ pa, j ^ pb).
    Block as[4], bs[4], hs[4];
    for (int r = 0; r < 4; ++r) {
      int i = r >> 1, j = r & 1;
      as[r] = (i ^ pa) ? a1 : a0;
      bs[r] = (j ^ pb) ? b1 : b0;
    }
    h.hash4(as, bs, gi, hs);
    // Row 0 defines the output label so it needs no ciphertext.
    const bool v0 = pa & pb;
    Block c0 = v0 ? _mm_xor_si128(hs[0], delta) : hs[0];
    w[wire] = c0;
    for (int r = 1; r < 4; ++r) {
      int i = r >> 1, j = r & 1;
      bool v = ((i ^ pa) & (j ^ pb)) != 0;
      Block out = v ? _mm_xor_si128(c0, delta) : c0;
      g.tables.push_back(to_label(_mm_xor_si128(hs[r], out)));
    }
  }
  g.decode.resize(c.outputs.size());
  for (std::size_t o = 0; o < c.outputs.size(); ++o) {
    Block l0 = w[c.outputs[o]];
    Block l1 = _mm_xor_si128(l0, delta);
    g.decode[o][0] = to_label(h(l0, _mm_setzero_si128(), kOutputTweak | o));
    g.decode[o][1] = to_label(h(l1, _mm_setzero_si128(), kOutputTweak | o));
  }
  return {std::move(g), std::move(keys)};
}

std::vector<Label> encode(const Keyset& keys, const std::vector<std::uint8_t>& bits) {
  if (bits.size() != keys.zero.size()) throw InputError("encode: one bit per input wire required");
  std::vector<Label> out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) out[i] = keys.label(static_cast<std::uint32_t>(i), bits[i] & 1);
  return out;
}

std::vector<Label> encode_group(const Keyset& keys, const WireGroup& group, const std::vector<std::uint8_t>& bits) {
  if (bits.size() != group.width) throw InputError("encode_group: width mismatch for " + group.name);
  std::vector<Label> out(bits.size());
  for (std::uint32_t i = 0; i < group.width; ++i) out[i] = keys.label(group.first + i, bits[i] & 1);
  return out;
}

std::optional<std::vector<std::uint8_t>> eval(const BooleanCircuit& c, const GarbledCircuit& g,
                                             const std::vector<Label>& inputs) {
  if (inputs.size() != c.num_inputs) throw InputError("eval: one label per input wire required");
  if (g.tables.size() != 3 * c.and_count() || g.decode.size() != c.outputs.size())
    throw InputError("eval: garbled material does not match circuit");
  const FixedKeyHash& h = hasher();
  std::vector<Block> w(c.num_wires());
  w[0] = to_block(g.one);
  for (std::uint32_t i = 0; i < c.num_inputs; ++i) w[1 + i] = to_block(inputs[i]);
  std::uint32_t wire = 1 + c.num_inputs;
  std::size_t row = 0;
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi, ++wire) {
    const Gate& gate = c.gates[gi];
    Block a = w[gate.in0], b = w[gate.in1];
    if (gate.type == GateType::kXor) {
      w[wire] = _mm_xor_si128(a, b);
      continue;
    }
    int r = (lsb(a) << 1) | static_cast<int>(lsb(b));
    Block out = h(a, b, gi);
    if (r != 0) out = _mm_xor_si128(out, to_block(g.tables[row + r - 1]));
    w[wire] = out;
    row += 3;
  }
  std::vector<std::uint8_t> bits(c.outputs.size());
  for (std::size_t o = 0; o < c.outputs.size(); ++o) {
    Block tag = h(w[c.outputs[o]], _mm_setzero_si128(), kOutputTweak | o);
    if (equal(tag, to_block(g.decode[o][0])))
      bits[o] = 0;
    else if (equal(tag, to_block(g.decode[o][1])))
      bits[o] = 1;
    else
      return std::nullopt;
  }
  return bits;
}

namespace {

enum RecordType : std::uint8_t { kRecXor = 0, kRecAnd = 1, kRecOutput = 2, kRecOne = 3 };
constexpr std::size_t kRecordHeader = 1 + 4 + 4;

}  // namespace

std::size_t serialized_size(const BooleanCircuit& c) {
  return 4 + 4 + c.gates.size() * kRecordHeader + c.and_count() * 3 * kLabelBytes + kRecordHeader + kLabelBytes +
         c.outputs.size() * (kRecordHeader + 2 * kLabelBytes) + 4;
}

Bytes serialize(const BooleanCircuit& c, const GarbledCircuit& g) {
  ByteWriter w(serialized_size(c));
  w.raw(as_bytes("PRGC"));
  w.u32(static_cast<std::uint32_t>(c.gates.size() + 1 + c.outputs.size()));
  std::size_t row = 0;
  for (const Gate& gate : c.gates) {
    w.u8(gate.type == GateType::kAnd ? kRecAnd : kRecXor);
    w.u32(gate.in0);
    w.u32(gate.in1);
    if (gate.type == GateType::kAnd) {
      for (int r = 0; r < 3; ++r) g.tables[row + r].write(w);
      row += 3;
    }
  }
  w.u8(kRecOne);
  w.u32(BooleanCircuit::kOneWire);
  w.u32(0);
  g.one.write(w);
  for (std::size_t o = 0; o < c.outputs.size(); ++o) {
    w.u8(kRecOutput);
    w.u32(c.outputs[o]);
    w.u32(static_cast<std::uint32_t>(o));
    g.decode[o][0].write(w);
    g.decode[o][1].write(w);
  }
  w.u32(static_cast<std::uint32_t>(kLabelBytes));
  return w.take();
}

GarbledCircuit deserialize(const BooleanCircuit& c, ByteView data) {
  if (data.size() < 12) throw DecodeError("garbled circuit: too short");
  ByteReader tail(data.last(4));
  if (tail.u32() != kLabelBytes) throw DecodeError("garbled circuit: label length mismatch");
  ByteReader r(data.first(data.size() - 4));
  auto magic = r.raw(4);
  if (std::memcmp(magic.data(), "PRGC", 4) != 0) throw DecodeError("garbled circuit: bad magic");
  if (r.u32() != c.gates.size() + 1 + c.outputs.size()) throw DecodeError("garbled circuit: record count mismatch");
  GarbledCircuit g;
  g.tables.reserve(3 * c.and_count());
  for (const Gate& gate : c.gates) {
    std::uint8_t type = r.u8();
    std::uint32_t in0 = r.u32(), in1 = r.u32();
    std::uint8_t want = gate.type == GateType::kAnd ? kRecAnd : kRecXor;
    if (type != want || in0 != gate.in0 || in1 != gate.in1) throw DecodeError("garbled circuit: topology mismatch");
    if (type == kRecAnd)
      for (int k = 0; k < 3; ++k) g.tables.push_back(Label::read(r));
  }
  if (r.u8() != kRecOne || r.u32() != BooleanCircuit::kOneWire || r.u32() != 0)
    throw DecodeError("garbled circuit: missing constant label");
  g.one = Label::read(r);
  g.decode.resize(c.outputs.size());
  for (std::size_t o = 0; o < c.outputs.size(); ++o) {
    if (r.u8() != kRecOutput || r.u32() != c.outputs[o] || r.u32() != o)
      throw DecodeError("garbled circuit: output record mismatch");
    g.decode[o][0] = Label::read(r);
    g.decode[o][1] = Label::read(r);
  }
  r.expect_end();
  return g;
}

}  // namespace privnav::gc
