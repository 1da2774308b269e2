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

// Inline AES-NI helpers shared by the AES, PRNG and garbling code.

#include <immintrin.h>
#include <wmmintrin.h>

#include <cstdint>

namespace privnav::crypto::aesni {

inline __m128i expand_step(__m128i key, __m128i gen) {
  gen = _mm_shuffle_epi32(gen, 0xff);
  key = _mm_xor_si128(key, _mm_slli_si128(key, 4));
  key = _mm_xor_si128(key, _mm_slli_si128(key, 4));
  key = _mm_xor_si128(key, _mm_slli_si128(key, 4));
  return _mm_xor_si128(key, gen);
}

inline void expand_key(const std::uint8_t key[16], __m128i rk[11]) {
  rk[0] = _mm_loadu_si128(reinterpret_cast<const __m128i*>(key));
  rk[1] = expand_step(rk[0], _mm_aeskeygenassist_si128(rk[0], 0x01));
  rk[2] = expand_step(rk[1], _mm_aeskeygenassist_si128(rk[1], 0x02));
  rk[3] = expand_step(rk[2], _mm_aeskeygenassist_si128(rk[2], 0x04));
  rk[4] = expand_step(rk[3], _mm_aeskeygenassist_si128(rk[3], 0x08));
  rk[5] = expand_step(rk[4], _mm_aeskeygenassist_si128(rk[4], 0x10));
  rk[6] = expand_step(rk[5], _mm_aeskeygenassist_si128(rk[5], 0x20));
  rk[7] = expand_step(rk[6], _mm_aeskeygenassist_si128(rk[6], 0x40));
  rk[8] = expand_step(rk[7], _mm_aeskeygenassist_si128(rk[7], 0x80));
  rk[9] = expand_step(rk[8], _mm_aeskeygenassist_si128(rk[8], 0x1b));
  rk[10] = expand_step(rk[9], _mm_aeskeygenassist_si128(rk[9], 0x36));
}

inline __m128i encrypt(const __m128i rk[11], __m128i b) {
  b = _mm_xor_si128(b, rk[0]);
  for (int i = 1; i < 10; ++i) b = _mm_aesenc_si128(b, rk[i]);
  return _mm_aesenclast_si128(b, rk[10]);
}

// Four independent blocks interleaved to hide aesenc latency.
inline void encrypt4(const __m128i rk[11], __m128i b[4]) {
  for (int j = 0; j < 4; ++j) b[j] = _mm_xor_si128(b[j], rk[0]);
  for (int i = 1; i < 10; ++i)
    for (int j = 0; j < 4; ++j) b[j] = _mm_aesenc_si128(b[j], rk[i]);
  for (int j = 0; j < 4; ++j) b[j] = _mm_aesenclast_si128(b[j], rk[10]);
}

inline const __m128i* as_schedule(const std::uint8_t* round_keys) {
  return reinterpret_cast<const __m128i*>(round_keys);
}

}  // namespace privnav::crypto::aesni
