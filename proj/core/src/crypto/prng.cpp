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

#include "privnav/crypto/prng.hpp"

#include <sodium.h>

#include "privnav/common/error.hpp"

namespace privnav::crypto {

Prng::Prng(const Key128& seed) : aes_(seed) {}

Prng Prng::from_os() {
  if (sodium_init() < 0) throw Error("libsodium initialisation failed");
  Key128 seed;
  randombytes_buf(seed.data(), seed.size());
  return Prng(seed);
}

Prng Prng::from_seed(std::uint64_t seed) {
  Key128 k{};
  for (int i = 0; i < 8; ++i) k[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  k[15] = 0x5e;
  return Prng(k);
}

void Prng::refill() {
  for (std::size_t i = 0; i < kBufBlocks; ++i) {
    std::uint64_t c = counter_++;
    std::memcpy(buf_ + 16 * i, &c, 8);
    std::memset(buf_ + 16 * i + 8, 0, 8);
  }
  aes_.encrypt_blocks(buf_, buf_, kBufBlocks);
  pos_ = 0;
}

void Prng::fill(void* out, std::size_t n) {
  auto* dst = static_cast<std::uint8_t*>(out);
  while (n > 0) {
    if (pos_ == sizeof(buf_)) refill();
    std::size_t take = std::min(n, sizeof(buf_) - pos_);
    std::memcpy(dst, buf_ + pos_, take);
    pos_ += take;
    dst += take;
    n -= take;
  }
}

Bytes Prng::bytes(std::size_t n) {
  Bytes out(n);
  fill(out.data(), n);
  return out;
}

Key128 Prng::key() {
  Key128 k;
  fill(k.data(), k.size());
  return k;
}

std::uint64_t Prng::next_u64() {
  std::uint64_t v;
  fill(&v, sizeof(v));
  return v;
}

std::uint64_t Prng::uniform(std::uint64_t bound) {
  if (bound == 0) throw InputError("Prng::uniform: zero bound");
  const std::uint64_t limit = max() - max() % bound;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

Prng Prng::fork() { return Prng(key()); }

}  // namespace privnav::crypto
