#pragma once
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "pqcan/profile.hpp"
#include "pqcan/rng.hpp"

namespace pqcan {

using Bytes = std::vector<std::uint8_t>;

struct KeyPair {
  Bytes public_key;
  Bytes secret_key;
};

struct EncapsResult {
  Bytes ciphertext;
  Bytes shared_secret;
};

// Pluggable crypto provider. Contract:
//   - decapsulate(sk, ct) equals encapsulate(pk, .)'s shared secret exactly
//     when (pk, sk) form a pair and ct is untampered;
//   - verify(pk, m, sign(sk, m)) is true for a matching pair and fails for
//     any tampered byte of message or signature.
// An adapter to a real PQC library implements this same interface.
class CryptoBackend {
 public:
  virtual ~CryptoBackend() = default;

  virtual KeyPair keygen(Rng& rng) = 0;
  virtual EncapsResult encapsulate(std::span<const std::uint8_t> public_key,
                                   Rng& rng) = 0;
  virtual Bytes decapsulate(std::span<const std::uint8_t> secret_key,
                            std::span<const std::uint8_t> ciphertext) = 0;
  virtual Bytes sign(std::span<const std::uint8_t> secret_key,
                     std::span<const std::uint8_t> message, Rng& rng) = 0;
  virtual bool verify(std::span<const std::uint8_t> public_key,
                      std::span<const std::uint8_t> message,
                      std::span<const std::uint8_t> signature) = 0;
};

// Size-faithful stand-in: outputs are pseudorandom bytes of exactly the
// profile's declared sizes. A key pair shares an embedded nonce; shared
// secrets and signature tags are keyed functions of that nonce and a digest
// of the ciphertext or message, which makes the contract invariants hold
// and any tampering detectable.
class MockBackend : public CryptoBackend {
 public:
  explicit MockBackend(const AlgorithmProfile& profile);

  KeyPair keygen(Rng& rng) override;
  EncapsResult encapsulate(std::span<const std::uint8_t> public_key,
                           Rng& rng) override;
  Bytes decapsulate(std::span<const std::uint8_t> secret_key,
                    std::span<const std::uint8_t> ciphertext) override;
  Bytes sign(std::span<const std::uint8_t> secret_key,
             std::span<const std::uint8_t> message, Rng& rng) override;
  bool verify(std::span<const std::uint8_t> public_key,
              std::span<const std::uint8_t> message,
              std::span<const std::uint8_t> signature) override;

 private:
  const AlgorithmProfile& profile_;
};

std::unique_ptr<CryptoBackend> make_mock_backend(const AlgorithmProfile& p);

}  // namespace pqcan
