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

#include <cstddef>
#include <cstdint>
#include <limits>

#include "privnav/common/bytes.hpp"
#include "privnav/crypto/aes.hpp"

namespace privnav::crypto {

// AES-128 in counter mode as a deterministic random generator. Satisfies
// UniformRandomBitGenerator so it can drive <random> distributions.
class Prng {
 public:
  using result_type = std::uint64_t;

  explicit Prng(const Key128& seed);
  // Seeded from the operating system.
  static Prng from_os();
  // Deterministic stream for tests and reproducible runs.
  static Prng from_seed(std::uint64_t seed);

  void fill(void* out, std::size_t n);
  Bytes bytes(std::size_t n);
  Key128 key();
  std::uint64_t next_u64();
  // Uniform in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t uniform(std::uint64_t bound);
  // Independent child stream keyed from this one.
  Prng fork();

  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  void refill();

  static constexpr std::size_t kBufBlocks = 64;
  Aes128 aes_;
  std::uint64_t counter_ = 0;
  alignas(16) std::uint8_t buf_[kBufBlocks * 16];
  std::size_t pos_ = sizeof(buf_);
};

}  // namespace privnav::crypto
