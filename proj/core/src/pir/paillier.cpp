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

#include "privnav/pir/paillier.hpp"

#include <string>

#include "privnav/common/error.hpp"

namespace privnav::pir {
namespace {

mpz_class random_bits(unsigned bits, crypto::Prng& rng) {
  Bytes b = rng.bytes((bits + 7) / 8);
  mpz_class v = from_bytes(b);
  mpz_fdiv_r_2exp(v.get_mpz_t(), v.get_mpz_t(), bits);
  return v;
}

mpz_class random_prime(unsigned bits, crypto::Prng& rng) {
  for (;;) {
    mpz_class c = random_bits(bits, rng);
    // Top two bits set so the product has exactly 2*bits bits.
    mpz_setbit(c.get_mpz_t(), bits - 1);
    mpz_setbit(c.get_mpz_t(), bits - 2);
    mpz_setbit(c.get_mpz_t(), 0);
    if (mpz_probab_prime_p(c.get_mpz_t(), 40) > 0) return c;
  }
}

mpz_class powm(const mpz_class& b, const mpz_class& e, const mpz_class& m) {
  mpz_class r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class invert(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) throw Error("paillier: non-invertible value");
  return r;
}

mpz_class random_unit(const mpz_class& n, crypto::Prng& rng) {
  for (;;) {
    mpz_class r = random_below(n, rng);
    if (r != 0) return r;
  }
}

}  // namespace

mpz_class random_below(const mpz_class& bound, crypto::Prng& rng) {
  // 64 extra bits make the modular bias negligible.
  mpz_class v = random_bits(static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2)) + 64, rng);
  return v % bound;
}

Bytes to_bytes(const mpz_class& v) {
  std::size_t len = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  if (v == 0) return {};
  Bytes out(len);
  mpz_export(out.data(), &len, 1, 1, 1, 0, v.get_mpz_t());
  out.resize(len);
  return out;
}

Bytes to_bytes(const mpz_class& v, std::size_t width) {
  Bytes b = to_bytes(v);
  if (b.size() > width) throw InputError("integer does not fit in " + std::to_string(width) + " bytes");
  b.insert(b.begin(), width - b.size(), 0);
  return b;
}

mpz_class from_bytes(ByteView b) {
  mpz_class v;
  if (!b.empty()) mpz_import(v.get_mpz_t(), b.size(), 1, 1, 1, 0, b.data());
  return v;
}

void write_bigints(ByteWriter& w, const std::vector<mpz_class>& v, std::size_t width) {
  w.u32(static_cast<std::uint32_t>(v.size()));
  for (const auto& x : v) {
    if (x < 0) throw InputError("negative integers are not serializable");
    w.blob(width ? to_bytes(x, width) : to_bytes(x));
  }
}

std::vector<mpz_class> read_bigints(ByteReader& r) {
  std::uint32_t count = r.u32();
  // Each element needs at least its length prefix.
  if (count > r.remaining() / 4) throw DecodeError("bigint array: count exceeds payload");
  std::vector<mpz_class> v(count);
  for (auto& x : v) x = from_bytes(r.blob());
  return v;
}

mpz_class PaillierPublicKey::encrypt(const mpz_class& m, crypto::Prng& rng) const {
  mpz_class r = random_unit(n, rng);
  mpz_class c = (1 + (m % n) * n) % n2;
  return c * powm(r, n, n2) % n2;
}

mpz_class PaillierPublicKey::add(const mpz_class& a, const mpz_class& b) const { return a * b % n2; }

mpz_class PaillierPublicKey::scale(const mpz_class& c, const mpz_class& k) const { return powm(c, k, n2); }

mpz_class PaillierSecretKey::decrypt(const PaillierPublicKey& pk, const mpz_class& c) const {
  auto half = [&](const mpz_class& prime, const mpz_class& sq, const mpz_class& h) -> mpz_class {
    mpz_class x = powm(c % sq, prime - 1, sq);
    mpz_class l = (x - 1) / prime;
    return l * h % prime;
  };
  mpz_class mp = half(p, p2, hp), mq = half(q, q2, hq);
  mpz_class t = (mp - mq) * q_inv_p % p;
  if (t < 0) t += p;
  return (mq + q * t) % pk.n;
}

mpz_class PaillierSecretKey::encrypt(const PaillierPublicKey& pk, const mpz_class& m, crypto::Prng& rng) const {
  mpz_class r = random_unit(pk.n, rng);
  // r^N mod p^2 with the exponent reduced mod phi(p^2) = p(p-1).
  mpz_class xp = powm(r % p2, pk.n % (p * (p - 1)), p2);
  mpz_class xq = powm(r % q2, pk.n % (q * (q - 1)), q2);
  mpz_class t = (xp - xq) * q2_inv_p2 % p2;
  if (t < 0) t += p2;
  mpz_class rn = xq + q2 * t;
  mpz_class c = (1 + (m % pk.n) * pk.n) % pk.n2;
  return c * rn % pk.n2;
}

PaillierKeypair paillier_keygen(unsigned bits, crypto::Prng& rng) {
  if (bits < 256 || bits % 2 != 0) throw InputError("paillier modulus must be an even size of at least 256 bits");
  for (;;) {
    mpz_class p = random_prime(bits / 2, rng), q = random_prime(bits / 2, rng);
    if (p == q) continue;
    mpz_class n = p * q;
    mpz_class phi = (p - 1) * (q - 1), g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), phi.get_mpz_t());
    if (g != 1) continue;
    PaillierKeypair k;
    k.pk.n = n;
    k.pk.n2 = n * n;
    k.pk.bits = bits;
    auto& s = k.sk;
    s.p = p;
    s.q = q;
    s.p2 = p * p;
    s.q2 = q * q;
    mpz_class gen = n + 1;
    s.hp = invert((powm(gen, p - 1, s.p2) - 1) / p, p);
    s.hq = invert((powm(gen, q - 1, s.q2) - 1) / q, q);
    s.q_inv_p = invert(q, p);
    s.q2_inv_p2 = invert(s.q2, s.p2);
    return k;
  }
}

}  // namespace privnav::pir
