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
#include <string>

#include "privnav/common/bytes.hpp"

namespace privnav::protocol {

enum class Tag : std::uint8_t {
  kSetupOtReq = 1,
  kSetupOtResp = 2,
  kPirSrcReq = 3,
  kPirSrcResp = 4,
  kPirDstReq = 5,
  kPirDstResp = 6,
  kOt2Req = 7,
  kOt2Resp = 8,
  kGcMaterial = 9,
  kSessionParams = 10,
  kError = 11,
};

bool is_known_tag(std::uint8_t t);
const char* tag_name(Tag t);

struct Frame {
  Tag tag = Tag::kError;
  Bytes payload;

  static Frame error(const std::string& message);
  // Message text of an ERROR frame.
  std::string error_message() const;
  bool operator==(const Frame&) const = default;
};

// Request/response channel. Implementations report failures as
// TransportError.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual Frame exchange(const Frame& request) = 0;
};

}  // namespace privnav::protocol
