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

#include "privnav/crypto/aead.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <memory>

#include "privnav/common/error.hpp"
#include "privnav/crypto/hash.hpp"

namespace privnav::crypto {
namespace {

struct Subkeys {
  Key128 enc;
  Key128 mac;
};

Subkeys derive(const Key128& key) {
  static constexpr std::string_view kLabel = "privnav/aead/v1";
  Bytes buf(kLabel.begin(), kLabel.end());
  buf.insert(buf.end(), key.begin(), key.end());
  Digest d = sha256(buf);
  Subkeys s;
  std::memcpy(s.enc.data(), d.data(), 16);
  std::memcpy(s.mac.data(), d.data() + 16, 16);
  return s;
}

std::array<std::uint8_t, 16> iv_of(const Nonce& n) {
  std::array<std::uint8_t, 16> iv{};
  ByteWriter w;
  w.u32(n.a);
  w.u32(n.b);
  w.u32(n.c);
  std::memcpy(iv.data(), w.buffer().data(), 12);
  return iv;
}

void ctr_xor(const Key128& key, const std::array<std::uint8_t, 16>& iv, ByteView in, std::uint8_t* out) {
  std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)> ctx(EVP_CIPHER_CTX_new(),
                                                                      EVP_CIPHER_CTX_free);
  int len = 0;
  if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ctr(), nullptr, key.data(), iv.data()) != 1 ||
      EVP_EncryptUpdate(ctx.get(), out, &len, in.data(), static_cast<int>(in.size())) != 1)
    throw Error("AES-CTR failed");
}

std::array<std::uint8_t, 32> mac_of(const Key128& mac_key, const std::array<std::uint8_t, 16>& iv,
                                     ByteView aad, ByteView ct) {
  ByteWriter w(16 + 8 + aad.size() + ct.size());
  w.raw(iv.data(), iv.size());
  w.u32(static_cast<std::uint32_t>(aad.size()));
  w.raw(aad);
  w.u32(static_cast<std::uint32_t>(ct.size()));
  w.raw(ct);
  std::array<std::uint8_t, 32> tag;
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), mac_key.data(), static_cast<int>(mac_key.size()), w.buffer().data(),
           w.size(), tag.data(), &len) == nullptr)
    throw Error("HMAC failed");
  return tag;
}

}  // namespace

Bytes seal(const Key128& key, const Nonce& nonce, ByteView aad, ByteView plaintext) {
  Subkeys sk = derive(key);
  auto iv = iv_of(nonce);
  Bytes out(plaintext.size() + kTagBytes);
  if (!plaintext.empty()) ctr_xor(sk.enc, iv, plaintext, out.data());
  auto tag = mac_of(sk.mac, iv, aad, ByteView(out.data(), plaintext.size()));
  std::memcpy(out.data() + plaintext.size(), tag.data(), kTagBytes);
  return out;
}

std::optional<Bytes> open(const Key128& key, const Nonce& nonce, ByteView aad, ByteView sealed) {
  if (sealed.size() < kTagBytes) return std::nullopt;
  Subkeys sk = derive(key);
  auto iv = iv_of(nonce);
  ByteView ct = sealed.first(sealed.size() - kTagBytes);
  auto tag = mac_of(sk.mac, iv, aad, ct);
  if (CRYPTO_memcmp(tag.data(), sealed.data() + ct.size(), kTagBytes) != 0) return std::nullopt;
  Bytes out(ct.size());
  if (!ct.empty()) ctr_xor(sk.enc, iv, ct, out.data());
  return out;
}

}  // namespace privnav::crypto
