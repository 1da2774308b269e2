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

#include "privnav/pir/pir.hpp"

#include <algorithm>
#include <optional>
#include <thread>

#include "fixed_base.hpp"
#include "privnav/common/error.hpp"

namespace privnav::pir {
namespace {

using detail::FixedBase;
using detail::Montgomery;

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index
// writes only its own output slot, so results do not depend on threads.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) body(i);
    });
  for (auto& th : pool) th.join();
}

std::vector<FixedBase> tables(const std::vector<mpz_class>& bases, const Montgomery& mod, std::size_t bits,
                              std::size_t uses, unsigned threads) {
  std::vector<std::optional<FixedBase>> tmp(bases.size());
  parallel_for(bases.size(), threads, [&](std::size_t i) { tmp[i].emplace(bases[i], mod, bits, uses); });
  std::vector<FixedBase> out;
  out.reserve(bases.size());
  for (auto& t : tmp) out.push_back(std::move(*t));
  return out;
}

void split(const mpz_class& c, const mpz_class& n, mpz_class& lo, mpz_class& hi) {
  mpz_tdiv_qr(hi.get_mpz_t(), lo.get_mpz_t(), c.get_mpz_t(), n.get_mpz_t());
}

void check_query(const PirQuery& q, const PirGeometry& g, const PaillierPublicKey& pk) {
  for (const auto& axis : q.axes) {
    if (axis.size() != g.side) throw ProtocolError("pir query does not match database geometry");
    for (const auto& c : axis)
      if (!pk.is_ciphertext(c)) throw ProtocolError("pir query element is not a ciphertext");
  }
}

template <class Enc>
PirQuery make_query(std::uint32_t index, const PirGeometry& g, Enc&& enc) {
  if (index >= g.n) throw InputError("pir index " + std::to_string(index) + " out of range");
  auto coord = g.coordinates(index);
  PirQuery q;
  for (int a = 0; a < 3; ++a) {
    q.axes[a].reserve(g.side);
    for (std::uint32_t i = 0; i < g.side; ++i) q.axes[a].push_back(enc(i == coord[a] ? 1 : 0));
  }
  return q;
}

}  // namespace

PirGeometry PirGeometry::make(std::uint32_t n, std::uint32_t record_bytes, unsigned modulus_bits) {
  if (n == 0) throw InputError("pir database must hold at least one record");
  if (record_bytes == 0) throw InputError("pir records must be nonempty");
  if (modulus_bits < 128) throw InputError("pir modulus too small");
  PirGeometry g;
  g.n = n;
  g.record_bytes = record_bytes;
  g.side = 1;
  while (std::uint64_t{g.side} * g.side * g.side < n) ++g.side;
  g.chunk_bytes = (modulus_bits - 64) / 8;
  g.chunks = (record_bytes + g.chunk_bytes - 1) / g.chunk_bytes;
  return g;
}

std::array<std::uint32_t, 3> PirGeometry::coordinates(std::uint32_t index) const {
  return {index % side, (index / side) % side, index / (side * side)};
}

PirDatabase::PirDatabase(PirGeometry geometry, std::vector<Bytes> records)
    : geometry_(geometry), records_(std::move(records)) {
  if (records_.size() != geometry_.n) throw InputError("pir database size does not match geometry");
  chunks_.resize(std::size_t{geometry_.n} * geometry_.chunks);
  for (std::uint32_t i = 0; i < geometry_.n; ++i) {
    const Bytes& r = records_[i];
    if (r.size() != geometry_.record_bytes) throw InputError("pir records must all have the same length");
    for (std::uint32_t c = 0; c < geometry_.chunks; ++c) {
      std::size_t off = std::size_t{c} * geometry_.chunk_bytes;
      std::size_t len = std::min<std::size_t>(geometry_.chunk_bytes, r.size() - off);
      // The final chunk is zero-padded on the right.
      Bytes buf(geometry_.chunk_bytes, 0);
      std::copy_n(r.begin() + off, len, buf.begin());
      chunks_[std::size_t{i} * geometry_.chunks + c] = from_bytes(buf);
    }
  }
}

const mpz_class& PirDatabase::chunk(std::uint32_t i, std::uint32_t c) const {
  if (i >= geometry_.n) return zero_;
  return chunks_[std::size_t{i} * geometry_.chunks + c];
}

PirQuery pir_query(std::uint32_t index, const PirGeometry& g, const PaillierPublicKey& pk, crypto::Prng& rng) {
  return make_query(index, g, [&](int bit) { return pk.encrypt(bit, rng); });
}

PirQuery pir_query(std::uint32_t index, const PirGeometry& g, const PaillierKeypair& keys, crypto::Prng& rng) {
  return make_query(index, g, [&](int bit) { return keys.sk.encrypt(keys.pk, bit, rng); });
}

PirResponse pir_answer(const PirDatabase& db, const PirQuery& q, const PaillierPublicKey& pk, unsigned threads) {
  const PirGeometry& g = db.geometry();
  check_query(q, g, pk);
  const std::size_t k = g.side, C = g.chunks;
  const std::size_t limb_bits = pk.bits;
  const Montgomery mont(pk.n2);
  const std::size_t L = mont.limbs();

  // Level 1: fold x. One ciphertext per (y, z, chunk), split into two limbs.
  auto t1 = tables(q.axes[0], mont, 8 * std::size_t{g.chunk_bytes}, k * k * C, threads);
  std::vector<mpz_class> l1(k * k * C * 2);  // [(z*k + y)*C + c][limb]
  parallel_for(k * k, threads, [&](std::size_t yz) {
    const std::size_t y = yz % k, z = yz / k;
    std::vector<mp_limb_t> acc(L), scratch(mont.scratch_limbs());
    mpz_class ct;
    for (std::size_t c = 0; c < C; ++c) {
      mont.set_one(acc.data());
      for (std::size_t x = 0; x < k; ++x) {
        auto idx = static_cast<std::uint32_t>(x + k * (y + k * z));
        t1[x].mul_pow(acc.data(), db.chunk(idx, static_cast<std::uint32_t>(c)), scratch.data());
      }
      mont.from_mont(ct, acc.data());
      std::size_t o = (yz * C + c) * 2;
      split(ct, pk.n, l1[o], l1[o + 1]);
    }
  });

  // Level 2: fold y over each limb. One ciphertext per (z, chunk, limb).
  auto t2 = tables(q.axes[1], mont, limb_bits, k * C * 2, threads);
  std::vector<mpz_class> l2(k * C * 2 * 2);  // [((z*C + c)*2 + j)][limb]
  parallel_for(k, threads, [&](std::size_t z) {
    std::vector<mp_limb_t> acc(L), scratch(mont.scratch_limbs());
    mpz_class ct;
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t j = 0; j < 2; ++j) {
        mont.set_one(acc.data());
        for (std::size_t y = 0; y < k; ++y)
          t2[y].mul_pow(acc.data(), l1[((z * k + y) * C + c) * 2 + j], scratch.data());
        mont.from_mont(ct, acc.data());
        std::size_t o = ((z * C + c) * 2 + j) * 2;
        split(ct, pk.n, l2[o], l2[o + 1]);
      }
  });

  // Level 3: fold z. Four ciphertexts per chunk.
  auto t3 = tables(q.axes[2], mont, limb_bits, C * 4, threads);
  PirResponse r;
  r.ciphertexts.resize(C * 4);
  parallel_for(C * 4, threads, [&](std::size_t o) {
    const std::size_t c = o / 4, jm = o % 4;
    std::vector<mp_limb_t> acc(L), scratch(mont.scratch_limbs());
    mont.set_one(acc.data());
    for (std::size_t z = 0; z < k; ++z) t3[z].mul_pow(acc.data(), l2[(z * C + c) * 4 + jm], scratch.data());
    mont.from_mont(r.ciphertexts[o], acc.data());
  });
  return r;
}

Bytes pir_decode(const PirResponse& r, const PirGeometry& g, const PaillierKeypair& keys) {
  if (r.ciphertexts.size() != g.response_ciphertexts()) throw ProtocolError("pir response has wrong length");
  const auto& pk = keys.pk;
  const auto& sk = keys.sk;
  Bytes out;
  out.reserve(std::size_t{g.chunks} * g.chunk_bytes);
  for (std::uint32_t c = 0; c < g.chunks; ++c) {
    mpz_class l1[2];
    for (int j = 0; j < 2; ++j) {
      const mpz_class& lo = r.ciphertexts[c * 4 + j * 2];
      const mpz_class& hi = r.ciphertexts[c * 4 + j * 2 + 1];
      mpz_class ct2 = sk.decrypt(pk, hi) * pk.n + sk.decrypt(pk, lo);
      l1[j] = sk.decrypt(pk, ct2);
    }
    mpz_class v = sk.decrypt(pk, l1[1] * pk.n + l1[0]);
    mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), 8 * std::size_t{g.chunk_bytes});
    Bytes b = to_bytes(v);
    out.insert(out.end(), g.chunk_bytes - b.size(), 0);
    out.insert(out.end(), b.begin(), b.end());
  }
  out.resize(g.record_bytes);
  return out;
}

Bytes encode_query(const PirQuery& q, const PaillierPublicKey& pk) {
  std::vector<mpz_class> flat;
  for (const auto& a : q.axes) flat.insert(flat.end(), a.begin(), a.end());
  ByteWriter w;
  write_bigints(w, flat, pk.ciphertext_bytes());
  return w.take();
}

PirQuery decode_query(ByteView b, const PirGeometry& g) {
  ByteReader r(b);
  auto flat = read_bigints(r);
  r.expect_end();
  if (flat.size() != g.query_ciphertexts()) throw DecodeError("pir query has wrong length");
  PirQuery q;
  for (int a = 0; a < 3; ++a)
    q.axes[a].assign(flat.begin() + a * g.side, flat.begin() + (a + 1) * g.side);
  return q;
}

Bytes encode_response(const PirResponse& resp, const PaillierPublicKey& pk) {
  ByteWriter w;
  write_bigints(w, resp.ciphertexts, pk.ciphertext_bytes());
  return w.take();
}

PirResponse decode_response(ByteView b, const PirGeometry& g) {
  ByteReader r(b);
  PirResponse resp{read_bigints(r)};
  r.expect_end();
  if (resp.ciphertexts.size() != g.response_ciphertexts()) throw DecodeError("pir response has wrong length");
  return resp;
}

}  // namespace privnav::pir
