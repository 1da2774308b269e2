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

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace privnav::pir::detail {

// Montgomery arithmetic modulo an odd m over raw limbs, R = 2^(64 limbs).
class Montgomery {
 public:
  explicit Montgomery(const mpz_class& odd_modulus);

  std::size_t limbs() const { return n_; }
  // Scratch needed by mul: 2 * limbs().
  std::size_t scratch_limbs() const { return 2 * n_; }

  void set_one(mp_limb_t* a) const;
  void to_mont(mp_limb_t* out, const mpz_class& x) const;
  void from_mont(mpz_class& out, const mp_limb_t* a) const;
  // out = a * b / R mod m. out may alias a or b.
  void mul(mp_limb_t* out, const mp_limb_t* a, const mp_limb_t* b, mp_limb_t* scratch) const;

 private:
  void redc(mp_limb_t* out, mp_limb_t* t) const;

  mpz_class m_;
  std::size_t n_;
  std::vector<mp_limb_t> mod_;  // n_ limbs
  mp_limb_t inv_;               // -m^-1 mod 2^64
  std::vector<mp_limb_t> one_;  // R mod m
};

// Windowed fixed-base exponentiation: table[j][d] = b^(d * 2^(w j)), so a
// power costs one multiplication per nonzero window.
class FixedBase {
 public:
  FixedBase(const mpz_class& base, const Montgomery& ctx, std::size_t exponent_bits, std::size_t uses);

  // acc *= base^e, acc in Montgomery form; e must fit in exponent_bits.
  void mul_pow(mp_limb_t* acc, const mpz_class& e, mp_limb_t* scratch) const;
  void pow(mpz_class& out, const mpz_class& e) const;

  unsigned window() const { return w_; }

 private:
  const Montgomery* ctx_;
  unsigned w_ = 1;
  std::size_t windows_ = 0;
  std::vector<mp_limb_t> table_;  // windows_ * (2^w - 1) entries of ctx limbs
};

}  // namespace privnav::pir::detail
