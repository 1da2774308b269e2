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

#include "privnav/service/wire.hpp"

#include "privnav/common/error.hpp"

namespace privnav::service {

using protocol::Frame;
using protocol::Tag;

Bytes encode_frame(const Frame& f) {
  if (f.payload.size() > kMaxFramePayload) throw InputError("frame payload too large");
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(f.payload.size()));
  w.u8(static_cast<std::uint8_t>(f.tag));
  w.raw(f.payload);
  return w.take();
}

FrameHeader parse_header(const std::uint8_t* header) {
  ByteReader r(ByteView(header, kFrameHeaderBytes));
  FrameHeader h;
  h.length = r.u32();
  h.tag = r.u8();
  if (h.length > kMaxFramePayload) throw DecodeError("frame length " + std::to_string(h.length) + " too large");
  if (!protocol::is_known_tag(h.tag)) throw DecodeError("unknown message tag " + std::to_string(h.tag));
  return h;
}

Frame decode_frame(ByteView b) {
  if (b.size() < kFrameHeaderBytes) throw DecodeError("truncated frame header");
  FrameHeader h = parse_header(b.data());
  if (b.size() - kFrameHeaderBytes != h.length) throw DecodeError("frame length does not match payload");
  Frame f;
  f.tag = static_cast<Tag>(h.tag);
  f.payload.assign(b.begin() + kFrameHeaderBytes, b.end());
  return f;
}

Frame CountingTransport::exchange(const Frame& request) {
  Frame resp = inner_.exchange(request);
  ExchangeRecord rec{request.tag, resp.tag, wire_size(request), wire_size(resp)};
  up_ += rec.up;
  down_ += rec.down;
  log_.push_back(rec);
  return resp;
}

}  // namespace privnav::service
