#include "pqcan/backend.hpp"

#include <algorithm>

namespace pqcan {

namespace {

std::uint64_t digest(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x00000100000001B3ull;
  }
  return h;
}

Bytes expand(std::uint64_t seed, std::size_t len) {
  Bytes out(len);
  Rng(seed).fill(out);
  return out;
}

// The pair nonce rides in the leading bytes of both keys, little endian,
// truncated to what the smaller key can hold so both sides recover the
// same value.
void embed_nonce(Bytes& key, std::uint64_t nonce) {
  for (std::size_t i = 0; i < key.size() && i < 8; ++i) {
    key[i] = static_cast<std::uint8_t>(nonce >> (8 * i));
  }
}

std::uint64_t extract_nonce(std::span<const std::uint8_t> key) {
  std::uint64_t nonce = 0;
  for (std::size_t i = 0; i < key.size() && i < 8; ++i) {
    nonce |= std::uint64_t(key[i]) << (8 * i);
  }
  return nonce;
}

std::uint64_t nonce_mask(std::size_t pk_len, std::size_t sk_len) {
  std::size_t width = std::min({pk_len, sk_len, std::size_t(8)});
  if (width == 8) return ~0ull;
  return (1ull << (8 * width)) - 1;
}

constexpr std::size_t kSigTag = 32;

}  // namespace

MockBackend::MockBackend(const AlgorithmProfile& profile) : profile_(profile) {}

KeyPair MockBackend::keygen(Rng& rng) {
  std::uint64_t nonce =
      rng.next_u64() & nonce_mask(profile_.public_key_bytes, profile_.secret_key_bytes);
  KeyPair kp;
  kp.public_key = expand(mix_seed(nonce, hash64("pk")), profile_.public_key_bytes);
  kp.secret_key = expand(mix_seed(nonce, hash64("sk")), profile_.secret_key_bytes);
  embed_nonce(kp.public_key, nonce);
  embed_nonce(kp.secret_key, nonce);
  return kp;
}

EncapsResult MockBackend::encapsulate(std::span<const std::uint8_t> public_key,
                                      Rng& rng) {
  std::uint64_t nonce = extract_nonce(public_key);
  EncapsResult r;
  r.ciphertext = expand(mix_seed(nonce, rng.next_u64()), profile_.ciphertext_bytes);
  r.shared_secret =
      expand(mix_seed(nonce, digest(r.ciphertext)), profile_.shared_secret_bytes);
  return r;
}

Bytes MockBackend::decapsulate(std::span<const std::uint8_t> secret_key,
                               std::span<const std::uint8_t> ciphertext) {
  std::uint64_t nonce = extract_nonce(secret_key);
  return expand(mix_seed(nonce, digest(ciphertext)), profile_.shared_secret_bytes);
}

Bytes MockBackend::sign(std::span<const std::uint8_t> secret_key,
                        std::span<const std::uint8_t> message, Rng&) {
  std::uint64_t nonce = extract_nonce(secret_key);
  std::size_t sig_len = profile_.signature_bytes;
  Bytes tag = expand(mix_seed(nonce, digest(message)), std::min(kSigTag, sig_len));
  if (sig_len <= tag.size()) return tag;
  Bytes fill = expand(mix_seed(hash64("sig-fill"), digest(tag)), sig_len - tag.size());
  tag.insert(tag.end(), fill.begin(), fill.end());
  return tag;
}

bool MockBackend::verify(std::span<const std::uint8_t> public_key,
                         std::span<const std::uint8_t> message,
                         std::span<const std::uint8_t> signature) {
  std::uint64_t nonce = extract_nonce(public_key);
  std::size_t sig_len = profile_.signature_bytes;
  if (signature.size() != sig_len) return false;
  Bytes tag = expand(mix_seed(nonce, digest(message)), std::min(kSigTag, sig_len));
  if (sig_len > tag.size()) {
    Bytes fill = expand(mix_seed(hash64("sig-fill"), digest(tag)), sig_len - tag.size());
    tag.insert(tag.end(), fill.begin(), fill.end());
  }
  return std::equal(tag.begin(), tag.end(), signature.begin(), signature.end());
}

std::unique_ptr<CryptoBackend> make_mock_backend(const AlgorithmProfile& p) {
  return std::make_unique<MockBackend>(p);
}

}  // namespace pqcan
