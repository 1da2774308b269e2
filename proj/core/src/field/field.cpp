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

#include "privnav/field/field.hpp"

#include <bit>
#include <string>

#include "privnav/common/error.hpp"

namespace privnav::field {
namespace {

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t d = 2; d * d <= v && d < (1u << 20); ++d)
    if (v % d == 0) return false;
  return true;
}

}  // namespace

Field::Field(Elem p) : p_(p) {
  if (p < 3 || !std::has_single_bit(p + 1))
    throw InputError("field order must be a Mersenne number 2^k - 1, got " + std::to_string(p));
  k_ = static_cast<unsigned>(std::countr_zero(p + 1));
  if (k_ > 61) throw InputError("field order exceeds 2^61 - 1");
  // 2^61 - 1 is prime but too large for trial division to finish quickly.
  if (p != kDefaultPrime && !is_prime(p)) throw InputError("field order " + std::to_string(p) + " is not prime");
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  Elem r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw InputError("inverse of zero");
  return pow(a, p_ - 2);
}

Elem Field::from_signed(std::int64_t v) const {
  std::int64_t m = v % static_cast<std::int64_t>(p_);
  if (m < 0) m += static_cast<std::int64_t>(p_);
  return static_cast<Elem>(m);
}

BlindingSet blinding_from(const Field& f, Elem alpha, Elem beta) {
  BlindingSet b;
  b.alpha = alpha;
  b.beta = beta;
  b.gamma = f.inv(alpha);
  b.delta = f.neg(f.mul(b.gamma, beta));
  return b;
}

BlindingSet make_blinding(const Field& f, crypto::Prng& rng) {
  Elem alpha = f.random_nonzero(rng);
  Elem beta = f.random(rng);
  return blinding_from(f, alpha, beta);
}

AffineRandomness random_affine(const Field& f, std::size_t d, crypto::Prng& rng) {
  AffineRandomness r;
  r.r1.resize(d);
  r.r2.resize(d);
  r.r3.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    r.r1[i] = f.random(rng);
    r.r2[i] = f.random(rng);
    r.r3[i] = f.random(rng);
  }
  return r;
}

AffineEncoding encode_source(const Field& f, std::span<const Elem> x, Elem alpha, Elem beta,
                             const AffineRandomness& r) {
  if (x.size() != r.dim()) throw InputError("encode_source: dimension mismatch");
  AffineEncoding enc(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    Elem xi = f.mul(alpha, x[i]);
    Elem zi = i == 0 ? beta : 0;
    enc[i].first = f.sub(xi, r.r1[i]);
    enc[i].second = f.add(f.add(f.mul(xi, r.r2[i]), zi), r.r3[i]);
  }
  return enc;
}

AffineEncoding encode_destination(const Field& f, std::span<const Elem> y, const AffineRandomness& r) {
  if (y.size() != r.dim()) throw InputError("encode_destination: dimension mismatch");
  AffineEncoding enc(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    enc[i].first = f.sub(y[i], r.r2[i]);
    enc[i].second = f.sub(f.sub(f.mul(y[i], r.r1[i]), f.mul(r.r1[i], r.r2[i])), r.r3[i]);
  }
  return enc;
}

std::pair<AffineEncoding, AffineEncoding> encode_pair(const Field& f, std::span<const Elem> x,
                                                      std::span<const Elem> y, Elem alpha, Elem beta,
                                                      const AffineRandomness& r) {
  return {encode_source(f, x, alpha, beta, r), encode_destination(f, y, r)};
}

Elem eval_affine(const Field& f, const AffineEncoding& src, const AffineEncoding& dst) {
  if (src.size() != dst.size()) throw InputError("eval_affine: dimension mismatch");
  Elem acc = 0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    acc = f.add(acc, f.mul(src[i].first, dst[i].first));
    acc = f.add(acc, f.add(src[i].second, dst[i].second));
  }
  return acc;
}

Elem inner_product(const Field& f, std::span<const Elem> x, std::span<const Elem> y) {
  if (x.size() != y.size()) throw InputError("inner_product: dimension mismatch");
  Elem acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc = f.add(acc, f.mul(x[i], y[i]));
  return acc;
}

int statistical_mu(const Field& f, unsigned tau) {
  // p = 2^k - 1, so floor(log2 p) = k - 1.
  return static_cast<int>(f.bits()) - 1 - static_cast<int>(tau) - 1;
}

}  // namespace privnav::field
