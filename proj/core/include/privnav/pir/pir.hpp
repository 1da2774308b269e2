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

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <vector>

#include "privnav/common/bytes.hpp"
#include "privnav/pir/paillier.hpp"

namespace privnav::pir {

// Records sit in a side x side x side cube, index = x + side*(y + side*z).
// Each record is cut into equal plaintext chunks.
struct PirGeometry {
  std::uint32_t n = 0;
  std::uint32_t record_bytes = 0;
  std::uint32_t side = 0;
  std::uint32_t chunk_bytes = 0;
  std::uint32_t chunks = 0;

  static PirGeometry make(std::uint32_t n, std::uint32_t record_bytes, unsigned modulus_bits);
  std::uint32_t padded() const { return side * side * side; }
  std::array<std::uint32_t, 3> coordinates(std::uint32_t index) const;
  std::size_t query_ciphertexts() const { return 3 * std::size_t{side}; }
  std::size_t response_ciphertexts() const { return 4 * std::size_t{chunks}; }
  bool operator==(const PirGeometry&) const = default;
};

class PirDatabase {
 public:
  // Throws InputError unless every record has geometry.record_bytes bytes.
  PirDatabase(PirGeometry geometry, std::vector<Bytes> records);

  const PirGeometry& geometry() const { return geometry_; }
  const Bytes& record(std::uint32_t i) const { return records_.at(i); }
  // Chunk c of record i as an integer; zero for padding records.
  const mpz_class& chunk(std::uint32_t i, std::uint32_t c) const;

 private:
  PirGeometry geometry_;
  std::vector<Bytes> records_;
  std::vector<mpz_class> chunks_;  // padded() * chunks, record-major
  mpz_class zero_;
};

// One encrypted indicator vector per cube axis.
struct PirQuery {
  std::array<std::vector<mpz_class>, 3> axes;
};

struct PirResponse {
  std::vector<mpz_class> ciphertexts;  // four per chunk
};

// Throws InputError when index >= n.
PirQuery pir_query(std::uint32_t index, const PirGeometry& g, const PaillierPublicKey& pk, crypto::Prng& rng);
// Client-side variant that uses the secret key for faster encryption.
PirQuery pir_query(std::uint32_t index, const PirGeometry& g, const PaillierKeypair& keys, crypto::Prng& rng);

// Folds the database along x, y, z. Control flow depends only on the
// geometry. Throws ProtocolError when the query does not fit the geometry.
PirResponse pir_answer(const PirDatabase& db, const PirQuery& q, const PaillierPublicKey& pk, unsigned threads = 1);

// Never throws on malformed content: a bad response decodes to garbage.
// Throws ProtocolError only when the ciphertext count is wrong.
Bytes pir_decode(const PirResponse& r, const PirGeometry& g, const PaillierKeypair& keys);

// Ciphertexts are written at the fixed width of pk.
Bytes encode_query(const PirQuery& q, const PaillierPublicKey& pk);
PirQuery decode_query(ByteView b, const PirGeometry& g);
Bytes encode_response(const PirResponse& r, const PaillierPublicKey& pk);
PirResponse decode_response(ByteView b, const PirGeometry& g);

}  // namespace privnav::pir
