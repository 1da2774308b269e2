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

#include "privnav/protocol/params.hpp"

#include "privnav/common/error.hpp"

namespace privnav::protocol {

int ProtocolParams::mu() const { return field::statistical_mu(field::Field(p), tau); }

gc::NeighborParams ProtocolParams::neighbor_params() const {
  gc::NeighborParams np;
  np.p = p;
  np.tau = tau;
  np.n = n;
  np.ell = ell;
  np.rho = rho;
  return np;
}

std::uint32_t ProtocolParams::neighbor(std::uint32_t u, roadgraph::Direction d) const {
  if (u >= topology.size()) return roadgraph::kNoNode;
  return topology[u][static_cast<std::size_t>(d)];
}

void ProtocolParams::validate(bool allow_toy_field) const {
  if (n == 0) throw InputError("protocol: empty graph");
  if (d == 0) throw InputError("protocol: factor rank must be positive");
  if (rounds == 0) throw InputError("protocol: at least one round is required");
  if (ell != 128 || rho != 128) throw InputError("protocol: only 128-bit symmetric and PRF keys are supported");
  if (topology.size() != n) throw InputError("protocol: topology does not cover every node");
  for (const auto& row : topology)
    for (std::uint32_t v : row)
      if (v != roadgraph::kNoNode && v >= n) throw InputError("protocol: topology refers to an unknown node");
  field::Field f(p);
  if (f.is_toy() && !allow_toy_field)
    throw InputError("protocol: toy field p=" + std::to_string(p) + " requires the insecure test flag");
  neighbor_params().validate();
}

void write_params(ByteWriter& w, const ProtocolParams& p) {
  w.u32(p.n);
  w.u32(p.d);
  w.u32(p.tau);
  w.u32(p.rounds);
  w.u64(p.p);
  w.u32(p.lambda);
  w.u32(p.ell);
  w.u32(p.rho);
  w.u8(static_cast<std::uint8_t>(p.delivery));
  w.u32(static_cast<std::uint32_t>(p.topology.size()));
  for (const auto& row : p.topology)
    for (std::uint32_t v : row) w.u32(v);
}

ProtocolParams read_params(ByteReader& r) {
  ProtocolParams p;
  p.n = r.u32();
  p.d = r.u32();
  p.tau = r.u32();
  p.rounds = r.u32();
  p.p = r.u64();
  p.lambda = r.u32();
  p.ell = r.u32();
  p.rho = r.u32();
  std::uint8_t mode = r.u8();
  if (mode > 1) throw DecodeError("unknown circuit delivery mode");
  p.delivery = static_cast<Delivery>(mode);
  std::uint32_t rows = r.u32();
  if (rows > r.remaining() / 16) throw DecodeError("topology truncated");
  p.topology.resize(rows);
  for (auto& row : p.topology)
    for (auto& v : row) v = r.u32();
  return p;
}

}  // namespace privnav::protocol
