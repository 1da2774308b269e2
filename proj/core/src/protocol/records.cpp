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

#include "privnav/protocol/records.hpp"

#include "privnav/common/error.hpp"
#include "privnav/crypto/aes.hpp"

namespace privnav::protocol {
namespace {

using roadgraph::Direction;

void write_encoding(ByteWriter& w, const field::AffineEncoding& e) {
  for (const auto& pair : e) {
    w.u64(pair.first);
    w.u64(pair.second);
  }
}

field::AffineEncoding read_encoding(ByteReader& r, std::uint32_t d, field::Elem p) {
  field::AffineEncoding e(d);
  for (auto& pair : e) {
    pair.first = r.u64();
    pair.second = r.u64();
    if (pair.first >= p || pair.second >= p) throw DecodeError("record holds an unreduced field element");
  }
  return e;
}

std::vector<gc::Label> read_labels(ByteReader& r, unsigned count) {
  std::vector<gc::Label> v(count);
  for (auto& l : v) l = gc::Label::read(r);
  return v;
}

Key128 xor_keys(const Key128& a, const Key128& b) {
  Key128 r;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] ^ b[i];
  return r;
}

}  // namespace

Key128 prf(const Key128& k, Direction d) {
  // Domain-separated block: tag bytes then the direction index.
  Key128 block{'p', 'r', 'i', 'v', 'n', 'a', 'v', '/', 'd', 'i', 'r', 0, 0, 0, 0, 0};
  block[15] = static_cast<std::uint8_t>(d);
  return crypto::Aes128(k).encrypt(block);
}

Key128 direction_key(const Key128& k_ne, const Key128& k_nw, Direction d) {
  return xor_keys(prf(k_ne, d), prf(k_nw, d));
}

DirectionKeys derive_direction_keys(const Key128& k_ne0, const Key128& k_ne1, const Key128& k_nw0,
                                    const Key128& k_nw1) {
  DirectionKeys out;
  for (Direction d : roadgraph::kDirections) {
    auto [bne, bnw] = roadgraph::direction_to_index(d);
    out[static_cast<std::size_t>(d)] = direction_key(bne ? k_ne1 : k_ne0, bnw ? k_nw1 : k_nw0, d);
  }
  return out;
}

std::size_t RecordShape::source_plain() const { return 32 * std::size_t{d} + node_bits * gc::kLabelBytes + 4 * kKappaBytes; }

std::size_t RecordShape::dest_plain() const { return 32 * std::size_t{d} + node_bits * gc::kLabelBytes; }

Bytes serialize(const SourceRecord& r) {
  ByteWriter w;
  write_encoding(w, r.ne);
  write_encoding(w, r.nw);
  for (const auto& l : r.s_labels) l.write(w);
  for (const auto& k : r.kappa) {
    if (k.size() != kKappaBytes) throw InputError("kappa slot has the wrong size");
    w.raw(k);
  }
  return w.take();
}

Bytes serialize(const DestRecord& r) {
  ByteWriter w;
  write_encoding(w, r.ne);
  write_encoding(w, r.nw);
  for (const auto& l : r.t_labels) l.write(w);
  return w.take();
}

SourceRecord parse_source(ByteView b, const RecordShape& shape, field::Elem p) {
  if (b.size() != shape.source_plain()) throw DecodeError("source record has the wrong size");
  ByteReader r(b);
  SourceRecord s;
  s.ne = read_encoding(r, shape.d, p);
  s.nw = read_encoding(r, shape.d, p);
  s.s_labels = read_labels(r, shape.node_bits);
  for (auto& k : s.kappa) {
    ByteView v = r.raw(kKappaBytes);
    k.assign(v.begin(), v.end());
  }
  r.expect_end();
  return s;
}

DestRecord parse_dest(ByteView b, const RecordShape& shape, field::Elem p) {
  if (b.size() != shape.dest_plain()) throw DecodeError("destination record has the wrong size");
  ByteReader r(b);
  DestRecord t;
  t.ne = read_encoding(r, shape.d, p);
  t.nw = read_encoding(r, shape.d, p);
  t.t_labels = read_labels(r, shape.node_bits);
  r.expect_end();
  return t;
}

crypto::Nonce record_nonce(std::uint32_t round, std::uint32_t node, Slot slot, std::uint32_t dir) {
  return {round, node, static_cast<std::uint32_t>(slot) + dir};
}

Bytes seal_source(const Key128& key, const Key128& session, std::uint32_t round, std::uint32_t node,
                  const SourceRecord& r) {
  return crypto::seal(key, record_nonce(round, node, Slot::kSource), session, serialize(r));
}

Bytes seal_dest(const Key128& key, const Key128& session, std::uint32_t round, std::uint32_t node,
                const DestRecord& r) {
  return crypto::seal(key, record_nonce(round, node, Slot::kDest), session, serialize(r));
}

std::optional<SourceRecord> open_source(const Key128& key, const Key128& session, std::uint32_t round,
                                        std::uint32_t node, ByteView sealed, const RecordShape& shape,
                                        field::Elem p) {
  auto plain = crypto::open(key, record_nonce(round, node, Slot::kSource), session, sealed);
  if (!plain) return std::nullopt;
  try {
    return parse_source(*plain, shape, p);
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

std::optional<DestRecord> open_dest(const Key128& key, const Key128& session, std::uint32_t round,
                                    std::uint32_t node, ByteView sealed, const RecordShape& shape, field::Elem p) {
  auto plain = crypto::open(key, record_nonce(round, node, Slot::kDest), session, sealed);
  if (!plain) return std::nullopt;
  try {
    return parse_dest(*plain, shape, p);
  } catch (const DecodeError&) {
    return std::nullopt;
  }
}

Bytes seal_kappa(const Key128& dir_key, const Key128& session, std::uint32_t round, std::uint32_t node,
                 Direction d, const Key128& next_key) {
  return crypto::seal(dir_key, record_nonce(round, node, Slot::kKappa, static_cast<std::uint32_t>(d)), session,
                      next_key);
}

std::optional<Key128> open_kappa(const Key128& dir_key, const Key128& session, std::uint32_t round,
                                 std::uint32_t node, Direction d, ByteView sealed) {
  auto plain =
      crypto::open(dir_key, record_nonce(round, node, Slot::kKappa, static_cast<std::uint32_t>(d)), session, sealed);
  if (!plain || plain->size() != 16) return std::nullopt;
  Key128 k;
  std::copy(plain->begin(), plain->end(), k.begin());
  return k;
}

}  // namespace privnav::protocol
