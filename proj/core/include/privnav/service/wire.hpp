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
#include <vector>

#include "privnav/common/bytes.hpp"
#include "privnav/protocol/frame.hpp"

namespace privnav::service {

// u32 little-endian payload length, u8 tag, payload.
inline constexpr std::size_t kFrameHeaderBytes = 5;
inline constexpr std::uint32_t kMaxFramePayload = 1u << 30;

struct FrameHeader {
  std::uint32_t length = 0;
  std::uint8_t tag = 0;
};

Bytes encode_frame(const protocol::Frame& f);
// Throws DecodeError on an overlong length or an unknown tag.
FrameHeader parse_header(const std::uint8_t* header);
// Exactly one frame; throws DecodeError otherwise.
protocol::Frame decode_frame(ByteView b);

inline std::size_t wire_size(const protocol::Frame& f) { return kFrameHeaderBytes + f.payload.size(); }

struct ExchangeRecord {
  protocol::Tag request = protocol::Tag::kError, response = protocol::Tag::kError;
  std::size_t up = 0, down = 0;  // framed sizes
};

// Counts framed bytes in both directions around another transport.
class CountingTransport : public protocol::Transport {
 public:
  explicit CountingTransport(protocol::Transport& inner) : inner_(inner) {}
  protocol::Frame exchange(const protocol::Frame& request) override;

  std::uint64_t bytes_up() const { return up_; }
  std::uint64_t bytes_down() const { return down_; }
  const std::vector<ExchangeRecord>& log() const { return log_; }

 private:
  protocol::Transport& inner_;
  std::uint64_t up_ = 0, down_ = 0;
  std::vector<ExchangeRecord> log_;
};

}  // namespace privnav::service
