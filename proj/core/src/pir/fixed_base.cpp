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

#include "fixed_base.hpp"

#include <cstring>
#include <limits>

#include "privnav/common/error.hpp"

namespace privnav::pir::detail {

Montgomery::Montgomery(const mpz_class& odd_modulus) : m_(odd_modulus) {
  if (mpz_even_p(m_.get_mpz_t()) || m_ <= 1) throw InputError("montgomery modulus must be odd and > 1");
  n_ = mpz_size(m_.get_mpz_t());
  mod_.assign(m_.get_mpz_t()->_mp_d, m_.get_mpz_t()->_mp_d + n_);
  // Newton iteration for the inverse of the low limb, doubling correct bits.
  mp_limb_t x = mod_[0];
  for (int i = 0; i < 6; ++i) x *= 2 - mod_[0] * x;
  inv_ = -x;
  one_.resize(n_);
  to_mont(one_.data(), mpz_class(1));
}

void Montgomery::set_one(mp_limb_t* a) const { std::memcpy(a, one_.data(), n_ * sizeof(mp_limb_t)); }

void Montgomery::to_mont(mp_limb_t* out, const mpz_class& x) const {
  mpz_class t;
  mpz_mul_2exp(t.get_mpz_t(), x.get_mpz_t(), 64 * n_);
  mpz_mod(t.get_mpz_t(), t.get_mpz_t(), m_.get_mpz_t());
  std::size_t k = mpz_size(t.get_mpz_t());
  std::memset(out, 0, n_ * sizeof(mp_limb_t));
  if (k) std::memcpy(out, t.get_mpz_t()->_mp_d, k * sizeof(mp_limb_t));
}

void Montgomery::from_mont(mpz_class& out, const mp_limb_t* a) const {
  std::vector<mp_limb_t> t(2 * n_, 0), r(n_);
  std::memcpy(t.data(), a, n_ * sizeof(mp_limb_t));
  redc(r.data(), t.data());
  mpz_import(out.get_mpz_t(), n_, -1, sizeof(mp_limb_t), 0, 0, r.data());
}

void Montgomery::redc(mp_limb_t* out, mp_limb_t* t) const {
  // Each step clears the low limb; the carry is parked in the cleared slot
  // and added back in one pass at the end.
  mp_limb_t* up = t;
  for (std::size_t i = 0; i < n_; ++i) {
    mp_limb_t q = up[0] * inv_;
    up[0] = mpn_addmul_1(up, mod_.data(), static_cast<mp_size_t>(n_), q);
    ++up;
  }
  mp_limb_t cy = mpn_add_n(out, up, t, static_cast<mp_size_t>(n_));
  if (cy || mpn_cmp(out, mod_.data(), static_cast<mp_size_t>(n_)) >= 0)
    mpn_sub_n(out, out, mod_.data(), static_cast<mp_size_t>(n_));
}

void Montgomery::mul(mp_limb_t* out, const mp_limb_t* a, const mp_limb_t* b, mp_limb_t* scratch) const {
  if (a == b)
    mpn_sqr(scratch, a, static_cast<mp_size_t>(n_));
  else
    mpn_mul_n(scratch, a, b, static_cast<mp_size_t>(n_));
  redc(out, scratch);
}

FixedBase::FixedBase(const mpz_class& base, const Montgomery& ctx, std::size_t exponent_bits, std::size_t uses)
    : ctx_(&ctx) {
  if (exponent_bits == 0) exponent_bits = 1;
  // Precomputation costs windows * (2^w - 1) products, each use one per window.
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (unsigned w = 1; w <= 10; ++w) {
    std::size_t windows = (exponent_bits + w - 1) / w;
    std::size_t cost = windows * ((std::size_t{1} << w) - 1) + uses * windows;
    if (cost < best) {
      best = cost;
      w_ = w;
    }
  }
  windows_ = (exponent_bits + w_ - 1) / w_;
  const std::size_t n = ctx.limbs(), per = (std::size_t{1} << w_) - 1;
  table_.resize(windows_ * per * n);
  std::vector<mp_limb_t> step(n), scratch(ctx.scratch_limbs());
  mpz_class reduced = base;
  ctx.to_mont(step.data(), reduced);
  for (std::size_t j = 0; j < windows_; ++j) {
    mp_limb_t* row = &table_[j * per * n];
    std::memcpy(row, step.data(), n * sizeof(mp_limb_t));
    for (std::size_t d = 1; d < per; ++d) ctx.mul(row + d * n, row + (d - 1) * n, step.data(), scratch.data());
    ctx.mul(step.data(), row + (per - 1) * n, step.data(), scratch.data());
  }
}

void FixedBase::mul_pow(mp_limb_t* acc, const mpz_class& e, mp_limb_t* scratch) const {
  const std::size_t n = ctx_->limbs(), per = (std::size_t{1} << w_) - 1;
  const mp_limb_t* ed = e.get_mpz_t()->_mp_d;
  const std::size_t el = mpz_size(e.get_mpz_t());
  const mp_limb_t mask = (mp_limb_t{1} << w_) - 1;
  for (std::size_t j = 0; j < windows_; ++j) {
    std::size_t bit = j * w_, li = bit / 64, off = bit % 64;
    if (li >= el) break;
    mp_limb_t digit = ed[li] >> off;
    if (off + w_ > 64 && li + 1 < el) digit |= ed[li + 1] << (64 - off);
    digit &= mask;
    if (digit == 0) continue;
    ctx_->mul(acc, acc, &table_[(j * per + digit - 1) * n], scratch);
  }
}

void FixedBase::pow(mpz_class& out, const mpz_class& e) const {
  std::vector<mp_limb_t> acc(ctx_->limbs()), scratch(ctx_->scratch_limbs());
  ctx_->set_one(acc.data());
  mul_pow(acc.data(), e, scratch.data());
  ctx_->from_mont(out, acc.data());
}

}  // namespace privnav::pir::detail
