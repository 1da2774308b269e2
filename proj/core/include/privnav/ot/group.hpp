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
#include <string_view>

#include "privnav/common/bytes.hpp"
#include "privnav/crypto/prng.hpp"

namespace privnav::ot {

// ristretto255: prime order q ~ 2^252, canonical 32-byte encodings.
using Point = std::array<std::uint8_t, 32>;
using Scalar = std::array<std::uint8_t, 32>;  // little-endian, reduced mod q

inline constexpr std::size_t kPointBytes = 32;

Scalar random_scalar(crypto::Prng& rng);
Scalar scalar_from_u64(std::uint64_t v);
Scalar scalar_add(const Scalar& a, const Scalar& b);
Scalar scalar_sub(const Scalar& a, const Scalar& b);
Scalar scalar_mul(const Scalar& a, const Scalar& b);
// 64 bytes of SHA-256 output over (domain, counter, digest) reduced mod q.
Scalar hash_to_scalar(std::string_view domain, ByteView digest);

Point identity();
Point base_mul(const Scalar& s);
// Identity results are returned rather than rejected.
Point mul(const Point& p, const Scalar& s);
Point add(const Point& a, const Point& b);
Point sub(const Point& a, const Point& b);
// Canonical encoding of a group element (the identity included).
bool is_valid(const Point& p);

}  // namespace privnav::ot
