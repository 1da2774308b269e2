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

namespace privnav::crypto {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(ByteView data);

// Incremental SHA-256 with helpers for length-unambiguous transcripts.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(ByteView data);
  Sha256& update(std::string_view s) { return update(as_bytes(s)); }
  Sha256& update_u32(std::uint32_t v);
  // Length-prefixed, so concatenations cannot collide.
  Sha256& update_field(ByteView data);
  Digest finish();

 private:
  void* ctx_;
};

}  // namespace privnav::crypto
