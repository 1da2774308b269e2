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

#include "privnav/crypto/aes.hpp"

#include "aesni.hpp"

namespace privnav::crypto {

Aes128::Aes128(const Key128& key) {
  __m128i rk[11];
  aesni::expand_key(key.data(), rk);
  for (int i = 0; i < 11; ++i) _mm_store_si128(reinterpret_cast<__m128i*>(round_keys_) + i, rk[i]);
}

Key128 Aes128::encrypt(const Key128& block) const {
  Key128 out;
  encrypt_blocks(block.data(), out.data(), 1);
  return out;
}

void Aes128::encrypt_blocks(const std::uint8_t* in, std::uint8_t* out, std::size_t nblocks) const {
  const __m128i* rk = aesni::as_schedule(round_keys_);
  std::size_t i = 0;
  for (; i + 4 <= nblocks; i += 4) {
    __m128i b[4];
    for (int j = 0; j < 4; ++j) b[j] = _mm_loadu_si128(reinterpret_cast<const __m128i*>(in) + i + j);
    aesni::encrypt4(rk, b);
    for (int j = 0; j < 4; ++j) _mm_storeu_si128(reinterpret_cast<__m128i*>(out) + i + j, b[j]);
  }
  for (; i < nblocks; ++i) {
    __m128i b = _mm_loadu_si128(reinterpret_cast<const __m128i*>(in) + i);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out) + i, aesni::encrypt(rk, b));
  }
}

}  // namespace privnav::crypto
