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
#include "privnav/crypto/aead.hpp"
#include "privnav/field/field.hpp"
#include "privnav/gc/garble.hpp"
#include "privnav/roadgraph/roadgraph.hpp"

namespace privnav::protocol {

using DirectionKeys = std::array<Key128, 4>;  // indexed by Direction

// F(k, dir): AES-128 under k of a block naming the direction.
Key128 prf(const Key128& k, roadgraph::Direction d);

// k_dir = F(k_NE^(b_NE), dir) xor F(k_NW^(b_NW), dir) where (b_NE, b_NW)
// is the bit pair of dir.
DirectionKeys derive_direction_keys(const Key128& k_ne0, const Key128& k_ne1, const Key128& k_nw0,
                                    const Key128& k_nw1);
Key128 direction_key(const Key128& k_ne, const Key128& k_nw, roadgraph::Direction d);

// Plaintext layouts. Field elements are little-endian u64, labels
// kLabelBytes each, kappa slots sealed 16-byte keys.
struct SourceRecord {
  field::AffineEncoding ne, nw;
  std::vector<gc::Label> s_labels;
  std::array<Bytes, 4> kappa;
};

struct DestRecord {
  field::AffineEncoding ne, nw;
  std::vector<gc::Label> t_labels;
};

struct RecordShape {
  std::uint32_t d = 0;
  unsigned node_bits = 0;
  std::size_t source_plain() const;
  std::size_t dest_plain() const;
  std::size_t source_sealed() const { return crypto::sealed_size(source_plain()); }
  std::size_t dest_sealed() const { return crypto::sealed_size(dest_plain()); }
};

inline constexpr std::size_t kKappaBytes = crypto::sealed_size(16);

Bytes serialize(const SourceRecord& r);
Bytes serialize(const DestRecord& r);
// Throw DecodeError on a size mismatch or an unreduced field element.
SourceRecord parse_source(ByteView b, const RecordShape& shape, field::Elem p);
DestRecord parse_dest(ByteView b, const RecordShape& shape, field::Elem p);

// AEAD nonces bind the round, the node and the record role.
enum class Slot : std::uint32_t { kSource = 0, kDest = 1, kKappa = 2 };
crypto::Nonce record_nonce(std::uint32_t round, std::uint32_t node, Slot slot, std::uint32_t dir = 0);

Bytes seal_source(const Key128& key, const Key128& session, std::uint32_t round, std::uint32_t node,
                  const SourceRecord& r);
Bytes seal_dest(const Key128& key, const Key128& session, std::uint32_t round, std::uint32_t node,
                const DestRecord& r);
std::optional<SourceRecord> open_source(const Key128& key, const Key128& session, std::uint32_t round,
                                        std::uint32_t node, ByteView sealed, const RecordShape& shape,
                                        field::Elem p);
std::optional<DestRecord> open_dest(const Key128& key, const Key128& session, std::uint32_t round,
                                    std::uint32_t node, ByteView sealed, const RecordShape& shape, field::Elem p);

Bytes seal_kappa(const Key128& dir_key, const Key128& session, std::uint32_t round, std::uint32_t node,
                 roadgraph::Direction d, const Key128& next_key);
std::optional<Key128> open_kappa(const Key128& dir_key, const Key128& session, std::uint32_t round,
                                 std::uint32_t node, roadgraph::Direction d, ByteView sealed);

}  // namespace privnav::protocol
