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

#include "privnav/protocol/round.hpp"

#include <algorithm>

#include "privnav/common/error.hpp"
#include "privnav/gc/neighbor.hpp"

namespace privnav::protocol {
namespace {

using roadgraph::Direction;

std::vector<field::Elem> reduce_row(const field::Field& f, const signfactor::IntMatrix& m, Eigen::Index row) {
  std::vector<field::Elem> out(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index k = 0; k < m.cols(); ++k) out[static_cast<std::size_t>(k)] = f.from_signed(m(row, k));
  return out;
}

gc::Label random_label(crypto::Prng& rng) {
  Bytes b = rng.bytes(gc::kLabelBytes);
  ByteReader r(b);
  return gc::Label::read(r);
}

std::vector<gc::Label> random_labels(std::size_t n, crypto::Prng& rng) {
  std::vector<gc::Label> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_label(rng));
  return v;
}

void place(std::vector<gc::Label>& dst, const gc::WireGroup& g, const gc::Label* src, std::size_t avail) {
  if (avail < g.width) throw InputError("missing labels for input group " + g.name);
  std::copy_n(src, g.width, dst.begin() + g.first);
}

}  // namespace

RecordShape record_shape(const ProtocolParams& p) {
  return RecordShape{p.d, p.neighbor_params().node_bits()};
}

std::shared_ptr<const ServerData> make_server_data(const roadgraph::RoadGraph& g,
                                                   const signfactor::CompressedRouting& c,
                                                   const ServerConfig& config) {
  if (!g.oriented()) throw InputError("server: graph edges must be oriented (run preprocess first)");
  if (c.n != g.n())
    throw InputError("server: routing matrices cover " + std::to_string(c.n) + " nodes but the graph has " +
                     std::to_string(g.n()));
  signfactor::check_bounds(c);

  auto data = std::make_shared<ServerData>();
  data->config = config;
  ProtocolParams& p = data->params;
  p.n = c.n;
  p.d = c.d;
  p.tau = c.tau;
  p.p = config.p;
  p.delivery = config.delivery;
  p.topology = g.topology();
  std::uint32_t longest = roadgraph::max_walk_length(g, signfactor::reconstruct(c));
  if (config.rounds != 0 && config.rounds < longest)
    throw InputError("server: R=" + std::to_string(config.rounds) + " is below the longest route (" +
                     std::to_string(longest) + " hops)");
  p.rounds = config.rounds != 0 ? config.rounds : std::max<std::uint32_t>(1, longest);
  p.validate(config.allow_toy_field);

  data->f = field::Field(p.p);
  for (std::uint32_t u = 0; u < p.n; ++u) {
    data->a_ne.push_back(reduce_row(data->f, c.a_ne, u));
    data->b_ne.push_back(reduce_row(data->f, c.b_ne, u));
    data->a_nw.push_back(reduce_row(data->f, c.a_nw, u));
    data->b_nw.push_back(reduce_row(data->f, c.b_nw, u));
  }
  data->circuit = gc::build_neighbor_circuit(p.neighbor_params());
  data->shape = record_shape(p);
  return data;
}

RoundMaterial build_round(const ServerData& data, const Key128& session, std::uint32_t round,
                          const std::vector<Key128>& src_keys, const std::vector<Key128>& next_keys,
                          const std::vector<Key128>& dst_keys, gc::GarbledCircuit garbled, gc::Keyset keys,
                          crypto::Prng& rng) {
  const ProtocolParams& p = data.params;
  const field::Field& f = data.f;
  RoundMaterial m;
  m.round = round;
  m.ne = field::make_blinding(f, rng);
  m.nw = field::make_blinding(f, rng);
  m.r_ne = field::random_affine(f, p.d, rng);
  m.r_nw = field::random_affine(f, p.d, rng);
  for (auto& k : m.prf_keys) k = rng.key();
  m.dir_keys = derive_direction_keys(m.prf_keys[0], m.prf_keys[1], m.prf_keys[2], m.prf_keys[3]);
  m.garbled = std::move(garbled);
  m.keys = std::move(keys);

  const unsigned nb = data.shape.node_bits;
  const gc::WireGroup& s_group = data.circuit.input_group("s");
  const gc::WireGroup& t_group = data.circuit.input_group("t");
  const Key128 absent{};
  m.src.reserve(p.n);
  m.dst.reserve(p.n);
  for (std::uint32_t u = 0; u < p.n; ++u) {
    SourceRecord sr;
    sr.ne = field::encode_source(f, data.a_ne[u], m.ne.alpha, m.ne.beta, m.r_ne);
    sr.nw = field::encode_source(f, data.a_nw[u], m.nw.alpha, m.nw.beta, m.r_nw);
    sr.s_labels = gc::encode_group(m.keys, s_group, gc::bits_of(u, nb));
    for (Direction d : roadgraph::kDirections) {
      std::uint32_t v = p.neighbor(u, d);
      const Key128& next = v == roadgraph::kNoNode ? absent : next_keys[v];
      sr.kappa[static_cast<std::size_t>(d)] =
          seal_kappa(m.dir_keys[static_cast<std::size_t>(d)], session, round, u, d, next);
    }
    m.src.push_back(seal_source(src_keys[u], session, round, u, sr));

    DestRecord dr;
    dr.ne = field::encode_destination(f, data.b_ne[u], m.r_ne);
    dr.nw = field::encode_destination(f, data.b_nw[u], m.r_nw);
    dr.t_labels = gc::encode_group(m.keys, t_group, gc::bits_of(u, nb));
    m.dst.push_back(seal_dest(dst_keys[u], session, round, u, dr));
  }
  return m;
}

std::vector<gc::Label> server_input_labels(const ServerData& data, const RoundMaterial& m) {
  const unsigned fb = data.f.bits();
  const std::array<std::vector<std::uint8_t>, 8> values = {
      gc::bits_of(m.ne.gamma, fb),   gc::bits_of(m.ne.delta, fb),   gc::bits_of(m.nw.gamma, fb),
      gc::bits_of(m.nw.delta, fb),   gc::bits_of(m.prf_keys[0]),    gc::bits_of(m.prf_keys[1]),
      gc::bits_of(m.prf_keys[2]),    gc::bits_of(m.prf_keys[3])};
  std::vector<gc::Label> out;
  for (std::size_t i = 0; i < kServerGroups.size(); ++i) {
    auto part = gc::encode_group(m.keys, data.circuit.input_group(kServerGroups[i]), values[i]);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<std::array<gc::Label, 2>> z_label_pairs(const ServerData& data, const gc::Keyset& keys) {
  std::vector<std::array<gc::Label, 2>> out;
  for (const char* name : {"z_ne", "z_nw"}) {
    const gc::WireGroup& g = data.circuit.input_group(name);
    for (std::uint32_t b = 0; b < g.width; ++b)
      out.push_back({keys.label(g.first + b, false), keys.label(g.first + b, true)});
  }
  return out;
}

OpenedRound open_round(const ProtocolParams& params, const Key128& session, std::uint32_t round, std::uint32_t s,
                       std::uint32_t t, const Key128& k_src, const Key128& k_dst, ByteView src_sealed,
                       ByteView dst_sealed, crypto::Prng& rng) {
  const RecordShape shape = record_shape(params);
  const field::Field f(params.p);
  OpenedRound o;
  auto src = open_source(k_src, session, round, s, src_sealed, shape, params.p);
  auto dst = open_dest(k_dst, session, round, t, dst_sealed, shape, params.p);
  o.src_ok = src.has_value();
  o.dst_ok = dst.has_value();
  if (src && dst) {
    o.z_ne = field::eval_affine(f, src->ne, dst->ne);
    o.z_nw = field::eval_affine(f, src->nw, dst->nw);
  } else {
    o.z_ne = f.random(rng);
    o.z_nw = f.random(rng);
  }
  o.s_labels = src ? std::move(src->s_labels) : random_labels(shape.node_bits, rng);
  o.t_labels = dst ? std::move(dst->t_labels) : random_labels(shape.node_bits, rng);
  if (src) o.kappa = std::move(src->kappa);
  return o;
}

std::vector<std::uint8_t> z_choice_bits(const ProtocolParams& params, field::Elem z_ne, field::Elem z_nw) {
  const unsigned fb = params.neighbor_params().field_bits();
  auto bits = gc::bits_of(z_ne, fb);
  auto nw = gc::bits_of(z_nw, fb);
  bits.insert(bits.end(), nw.begin(), nw.end());
  return bits;
}

std::vector<gc::Label> assemble_labels(const gc::BooleanCircuit& c, const std::vector<gc::Label>& z_labels,
                                       const std::vector<gc::Label>& server_labels, const OpenedRound& opened) {
  std::vector<gc::Label> labels(c.num_inputs);
  const gc::WireGroup& zne = c.input_group("z_ne");
  const gc::WireGroup& znw = c.input_group("z_nw");
  if (z_labels.size() != std::size_t{zne.width} + znw.width) throw InputError("wrong number of z labels");
  place(labels, zne, z_labels.data(), z_labels.size());
  place(labels, znw, z_labels.data() + zne.width, z_labels.size() - zne.width);
  std::size_t off = 0;
  for (const char* name : kServerGroups) {
    const gc::WireGroup& g = c.input_group(name);
    place(labels, g, server_labels.data() + std::min(off, server_labels.size()),
          server_labels.size() - std::min(off, server_labels.size()));
    off += g.width;
  }
  if (off != server_labels.size()) throw InputError("wrong number of server labels");
  place(labels, c.input_group("s"), opened.s_labels.data(), opened.s_labels.size());
  place(labels, c.input_group("t"), opened.t_labels.data(), opened.t_labels.size());
  return labels;
}

RoundOutcome finish_round(const ProtocolParams& params, const gc::BooleanCircuit& c,
                          const gc::GarbledCircuit* garbled, const std::vector<gc::Label>& labels,
                          const Key128& session, std::uint32_t round, std::uint32_t s, const OpenedRound& opened,
                          crypto::Prng& rng) {
  RoundOutcome r;
  r.next_key = rng.key();
  if (garbled == nullptr || labels.size() != c.num_inputs) return r;
  std::optional<std::vector<std::uint8_t>> out;
  try {
    out = gc::eval(c, *garbled, labels);
  } catch (const Error&) {
    return r;
  }
  if (!out) return r;
  gc::NeighborOutput res = gc::unpack_neighbor_outputs(*out);
  if (!res.valid) return r;
  r.circuit_valid = true;
  Direction d = roadgraph::index_to_direction(res.b_ne, res.b_nw);
  r.dir = d;
  std::uint32_t v = params.neighbor(s, d);
  if (v == roadgraph::kNoNode) return r;
  const Bytes& kappa = opened.kappa[static_cast<std::size_t>(d)];
  if (kappa.size() != kKappaBytes) return r;
  auto next = open_kappa(direction_key(res.k_ne, res.k_nw, d), session, round, s, d, kappa);
  if (!next) return r;
  r.hop = v;
  r.next_key = *next;
  return r;
}

}  // namespace privnav::protocol
