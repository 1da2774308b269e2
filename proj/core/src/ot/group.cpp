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

#include "privnav/ot/group.hpp"

#include <sodium.h>

#include "privnav/common/error.hpp"
#include "privnav/crypto/hash.hpp"

namespace privnav::ot {
namespace {

void ensure_init() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw Error("libsodium initialisation failed");
}

}  // namespace

Scalar random_scalar(crypto::Prng& rng) {
  std::uint8_t wide[crypto_core_ristretto255_NONREDUCEDSCALARBYTES];
  rng.fill(wide, sizeof(wide));
  Scalar s;
  crypto_core_ristretto255_scalar_reduce(s.data(), wide);
  return s;
}

Scalar scalar_from_u64(std::uint64_t v) {
  Scalar s{};
  for (int i = 0; i < 8; ++i) s[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return s;
}

Scalar scalar_add(const Scalar& a, const Scalar& b) {
  Scalar r;
  crypto_core_ristretto255_scalar_add(r.data(), a.data(), b.data());
  return r;
}

Scalar scalar_sub(const Scalar& a, const Scalar& b) {
  Scalar r;
  crypto_core_ristretto255_scalar_sub(r.data(), a.data(), b.data());
  return r;
}

Scalar scalar_mul(const Scalar& a, const Scalar& b) {
  Scalar r;
  crypto_core_ristretto255_scalar_mul(r.data(), a.data(), b.data());
  return r;
}

Scalar hash_to_scalar(std::string_view domain, ByteView digest) {
  std::uint8_t wide[64];
  for (std::uint32_t half = 0; half < 2; ++half) {
    crypto::Sha256 h;
    h.update_field(as_bytes(domain)).update_u32(half).update_field(digest);
    auto d = h.finish();
    std::copy(d.begin(), d.end(), wide + 32 * half);
  }
  Scalar s;
  crypto_core_ristretto255_scalar_reduce(s.data(), wide);
  return s;
}

Point identity() { return Point{}; }

Point base_mul(const Scalar& s) {
  ensure_init();
  Point p;
  if (crypto_scalarmult_ristretto255_base(p.data(), s.data()) != 0) return identity();
  return p;
}

Point mul(const Point& p, const Scalar& s) {
  ensure_init();
  Point r;
  if (crypto_scalarmult_ristretto255(r.data(), s.data(), p.data()) != 0) return identity();
  return r;
}

Point add(const Point& a, const Point& b) {
  Point r;
  if (crypto_core_ristretto255_add(r.data(), a.data(), b.data()) != 0) throw ProtocolError("invalid group element");
  return r;
}

Point sub(const Point& a, const Point& b) {
  Point r;
  if (crypto_core_ristretto255_sub(r.data(), a.data(), b.data()) != 0) throw ProtocolError("invalid group element");
  return r;
}

bool is_valid(const Point& p) {
  ensure_init();
  return p == identity() || crypto_core_ristretto255_is_valid_point(p.data()) == 1;
}

}  // namespace privnav::ot
