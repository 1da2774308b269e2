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
#include <span>
#include <utility>
#include <vector>

#include "privnav/crypto/prng.hpp"

namespace privnav::field {

using Elem = std::uint64_t;

inline constexpr Elem kDefaultPrime = (Elem{1} << 61) - 1;

// Arithmetic modulo a Mersenne prime p = 2^k - 1. The default is 2^61 - 1;
// small primes (31, 127, 8191, ...) exist for exhaustive and statistical
// tests only.
class Field {
 public:
  explicit Field(Elem p = kDefaultPrime);

  Elem p() const { return p_; }
  // k such that p = 2^k - 1; also the bit width of a reduced element.
  unsigned bits() const { return k_; }
  bool is_toy() const { return p_ != kDefaultPrime; }

  Elem reduce(unsigned __int128 v) const {
    // Fold twice: v < 2^(2k) so the first fold leaves < 2^(k+1).
    unsigned __int128 s = (v & p_) + (v >> k_);
    Elem r = static_cast<Elem>((s & p_) + (s >> k_));
    return r >= p_ ? r - p_ : r;
  }
  Elem add(Elem a, Elem b) const {
    Elem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const { return reduce(static_cast<unsigned __int128>(a) * b); }
  Elem pow(Elem a, std::uint64_t e) const;
  // Throws InputError on zero.
  Elem inv(Elem a) const;

  // Maps a signed integer into the field.
  Elem from_signed(std::int64_t v) const;
  // Representative in (-p/2, p/2).
  std::int64_t centered(Elem a) const {
    return a <= p_ / 2 ? static_cast<std::int64_t>(a) : static_cast<std::int64_t>(a) - static_cast<std::int64_t>(p_);
  }

  Elem random(crypto::Prng& rng) const { return rng.uniform(p_); }
  Elem random_nonzero(crypto::Prng& rng) const { return 1 + rng.uniform(p_ - 1); }

  bool operator==(const Field& o) const { return p_ == o.p_; }

 private:
  Elem p_;
  unsigned k_;
};

// Blinding factors and their unblinding counterparts.
struct BlindingSet {
  Elem alpha = 1;
  Elem beta = 0;
  Elem gamma = 1;  // alpha^-1
  Elem delta = 0;  // -alpha^-1 * beta
};

BlindingSet make_blinding(const Field& f, crypto::Prng& rng);
BlindingSet blinding_from(const Field& f, Elem alpha, Elem beta);

// One coordinate of an affine encoding.
struct AffinePair {
  Elem first = 0;
  Elem second = 0;
  bool operator==(const AffinePair&) const = default;
};
using AffineEncoding = std::vector<AffinePair>;

// Shared randomness r = (r1, r2, r3), each of dimension d.
struct AffineRandomness {
  std::vector<Elem> r1, r2, r3;
  std::size_t dim() const { return r1.size(); }
};

AffineRandomness random_affine(const Field& f, std::size_t d, crypto::Prng& rng);

// Source side encodes x' = alpha * x with constants z_1 = beta, z_i = 0.
AffineEncoding encode_source(const Field& f, std::span<const Elem> x, Elem alpha, Elem beta,
                             const AffineRandomness& r);
AffineEncoding encode_destination(const Field& f, std::span<const Elem> y, const AffineRandomness& r);

std::pair<AffineEncoding, AffineEncoding> encode_pair(const Field& f, std::span<const Elem> x,
                                                      std::span<const Elem> y, Elem alpha, Elem beta,
                                                      const AffineRandomness& r);

// sum_i src_i.first * dst_i.first + src_i.second + dst_i.second.
Elem eval_affine(const Field& f, const AffineEncoding& src, const AffineEncoding& dst);

Elem inner_product(const Field& f, std::span<const Elem> x, std::span<const Elem> y);

// Statistical parameter: floor(log2 p) - tau - 1.
int statistical_mu(const Field& f, unsigned tau);

}  // namespace privnav::field
