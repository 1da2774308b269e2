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
#include <optional>

#include "privnav/common/bytes.hpp"

namespace privnav::crypto {

// AES-128-CTR then HMAC-SHA256 truncated to 16 bytes (encrypt-then-MAC).
// Encryption and MAC subkeys are derived from the 128-bit key with SHA-256.
inline constexpr std::size_t kTagBytes = 16;

struct Nonce {
  std::uint32_t a = 0, b = 0, c = 0;
};

Bytes seal(const Key128& key, const Nonce& nonce, ByteView aad, ByteView plaintext);
std::optional<Bytes> open(const Key128& key, const Nonce& nonce, ByteView aad, ByteView sealed);

inline constexpr std::size_t sealed_size(std::size_t plaintext_bytes) {
  return plaintext_bytes + kTagBytes;
}

}  // namespace privnav::crypto
