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

#include <vector>

#include "privnav/common/bytes.hpp"
#include "privnav/crypto/prng.hpp"

namespace privnav::pir {

// Generator is fixed to N + 1, so Enc(m; r) = (1 + mN) r^N mod N^2.
struct PaillierPublicKey {
  mpz_class n, n2;
  unsigned bits = 0;

  mpz_class encrypt(const mpz_class& m, crypto::Prng& rng) const;
  mpz_class add(const mpz_class& a, const mpz_class& b) const;         // Enc(a + b)
  mpz_class scale(const mpz_class& c, const mpz_class& k) const;       // Enc(k m)
  // Byte length of a ciphertext in fixed-width form.
  std::size_t ciphertext_bytes() const { return (2 * bits + 7) / 8; }
  bool is_ciphertext(const mpz_class& c) const { return c > 0 && c < n2; }
};

struct PaillierSecretKey {
  mpz_class p, q, p2, q2;
  mpz_class hp, hq;     // L_p(g^(p-1) mod p^2)^-1 mod p, same for q
  mpz_class q_inv_p;    // q^-1 mod p, for CRT recombination
  mpz_class q2_inv_p2;  // q^2^-1 mod p^2

  // Total on [0, N^2): ill-formed input decrypts to an unspecified value.
  mpz_class decrypt(const PaillierPublicKey& pk, const mpz_class& c) const;
  // Same distribution as pk.encrypt, with r^N computed by CRT.
  mpz_class encrypt(const PaillierPublicKey& pk, const mpz_class& m, crypto::Prng& rng) const;
};

struct PaillierKeypair {
  PaillierPublicKey pk;
  PaillierSecretKey sk;
};

// bits is the modulus length; 512 is for tests only. Throws InputError for
// sizes below 256 or odd sizes.
PaillierKeypair paillier_keygen(unsigned bits, crypto::Prng& rng);

// Uniform in [0, bound).
mpz_class random_below(const mpz_class& bound, crypto::Prng& rng);

// Big-endian magnitude, minimal length (empty for zero).
Bytes to_bytes(const mpz_class& v);
mpz_class from_bytes(ByteView b);

// Left-padded to width bytes; throws InputError if v does not fit.
Bytes to_bytes(const mpz_class& v, std::size_t width);

// u32 count, then per element u32 byte length and the big-endian magnitude.
// A nonzero width pads every magnitude to that many bytes so message sizes
// do not depend on the values.
void write_bigints(ByteWriter& w, const std::vector<mpz_class>& v, std::size_t width = 0);
std::vector<mpz_class> read_bigints(ByteReader& r);

}  // namespace privnav::pir
