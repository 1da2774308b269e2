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

#include "privnav/common/bytes.hpp"

namespace privnav::crypto {

// AES-128 block encryption using AES-NI.
class Aes128 {
 public:
  explicit Aes128(const Key128& key);

  Key128 encrypt(const Key128& block) const;
  // ECB over nblocks contiguous 16-byte blocks; in and out may alias.
  void encrypt_blocks(const std::uint8_t* in, std::uint8_t* out, std::size_t nblocks) const;

  const std::uint8_t* round_keys() const { return round_keys_; }

 private:
  alignas(16) std::uint8_t round_keys_[11 * 16];
};

}  // namespace privnav::crypto
