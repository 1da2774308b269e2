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

#include "privnav/protocol/frame.hpp"

namespace privnav::protocol {

bool is_known_tag(std::uint8_t t) { return t >= 1 && t <= 11; }

const char* tag_name(Tag t) {
  switch (t) {
    case Tag::kSetupOtReq: return "SETUP_OT_REQ";
    case Tag::kSetupOtResp: return "SETUP_OT_RESP";
    case Tag::kPirSrcReq: return "ROUND_PIR_SRC_REQ";
    case Tag::kPirSrcResp: return "ROUND_PIR_SRC_RESP";
    case Tag::kPirDstReq: return "ROUND_PIR_DST_REQ";
    case Tag::kPirDstResp: return "ROUND_PIR_DST_RESP";
    case Tag::kOt2Req: return "ROUND_OT2_REQ";
    case Tag::kOt2Resp: return "ROUND_OT2_RESP";
    case Tag::kGcMaterial: return "ROUND_GC_MATERIAL";
    case Tag::kSessionParams: return "SESSION_PARAMS";
    case Tag::kError: return "ERROR";
  }
  return "UNKNOWN";
}

Frame Frame::error(const std::string& message) {
  Frame f;
  f.tag = Tag::kError;
  f.payload.assign(message.begin(), message.end());
  return f;
}

std::string Frame::error_message() const { return std::string(payload.begin(), payload.end()); }

}  // namespace privnav::protocol
