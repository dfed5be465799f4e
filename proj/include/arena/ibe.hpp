#ifndef ARENA_IBE_HPP
#define ARENA_IBE_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arena/bits.hpp"
#include "arena/domain.hpp"

namespace arena {

class RngStream;

// Identity-based encryption, simulation grade.  Two instantiations are
// provided:
//
//  * kTrivialPke  - one textbook hashed-ElGamal keypair per identity over
//                   a small prime-order group; the master public key is
//                   the concatenation of all identity public keys, so its
//                   length is m*lambda bits.
//  * kCompact     - a keyed-keystore construction whose master public key
//                   has length lambda*ceil(log2 m) bits; identity keys are
//                   derived from the master public key by a non-
//                   cryptographic mixing function.
//
// Neither scheme offers real cryptographic security; they exist to give
// the game constructions honest interface semantics (exact completeness,
// randomized encryption, explicit decryption failure) at desk scale.
// Do not reuse outside simulations.
enum class IbeSchemeKind { kTrivialPke, kCompact };

const char* scheme_name(IbeSchemeKind kind);

using MasterSecret = std::vector<std::uint64_t>;

struct IbeKeyMaterial {
  IbeSchemeKind kind;
  std::uint32_t m = 0;
  std::size_t lambda = 0;
  BitString mpk;
  MasterSecret msk;
};

// Ciphertext of `nbytes` plaintext bytes for one identity.  `body` layout
// is scheme-internal; the identity tag is public.
struct Ciphertext {
  std::uint32_t identity = 0;
  std::uint32_t nbytes = 0;
  std::vector<std::uint64_t> body;

  bool operator==(const Ciphertext& o) const {
    return identity == o.identity && nbytes == o.nbytes && body == o.body;
  }
};

// Plaintext alphabet used by the game constructions: one value in
// {-1,0,+1}, carried in two bits of a single byte.  Arbitrary byte
// strings are also supported through encrypt/decrypt directly.
std::uint8_t encode_value(int value);       // value in {-1,0,1}
std::optional<int> decode_value(std::uint8_t byte);

struct DecryptedValue {
  int value = 0;   // meaningful only when ok
  bool ok = false; // false = explicit decryption failure
};

class IbeScheme {
 public:
  IbeScheme(std::uint32_t m, std::size_t lambda);
  virtual ~IbeScheme() = default;

  virtual IbeSchemeKind kind() const = 0;
  std::uint32_t identity_count() const { return m_; }
  std::size_t lambda() const { return lambda_; }
  // Bit length k shared by the master public key and every identity key.
  virtual std::size_t key_bits() const = 0;

  virtual IbeKeyMaterial setup(RngStream& rng) const = 0;
  // Deterministic: same (msk, id) always yields the same key.
  virtual BitString keygen(const MasterSecret& msk, std::uint32_t id) const = 0;
  virtual Ciphertext encrypt(const BitString& mpk, std::uint32_t id,
                             const std::vector<std::uint8_t>& bytes,
                             RngStream& rng) const = 0;
  // Returns the plaintext, or nullopt if the key does not match the
  // ciphertext (authenticated payload; never a silent wrong plaintext).
  virtual std::optional<std::vector<std::uint8_t>> decrypt(const BitString& sk,
                                                           const Ciphertext& ct) const = 0;

  Ciphertext encrypt_value(const BitString& mpk, std::uint32_t id, int value,
                           RngStream& rng) const;
  DecryptedValue decrypt_value(const BitString& sk, const Ciphertext& ct) const;

 protected:
  std::uint32_t m_;
  std::size_t lambda_;
};

std::unique_ptr<IbeScheme> make_scheme(IbeSchemeKind kind, std::uint32_t m,
                                       std::size_t lambda);

// Hashed-ElGamal per-identity PKE; k = m*lambda.  lambda in [8,64].
class TrivialPkeIbe : public IbeScheme {
 public:
  TrivialPkeIbe(std::uint32_t m, std::size_t lambda);
  IbeSchemeKind kind() const override { return IbeSchemeKind::kTrivialPke; }
  std::size_t key_bits() const override { return m_ * lambda_; }
  IbeKeyMaterial setup(RngStream& rng) const override;
  BitString keygen(const MasterSecret& msk, std::uint32_t id) const override;
  Ciphertext encrypt(const BitString& mpk, std::uint32_t id,
                     const std::vector<std::uint8_t>& bytes,
                     RngStream& rng) const override;
  std::optional<std::vector<std::uint8_t>> decrypt(const BitString& sk,
                                                   const Ciphertext& ct) const override;

  std::uint64_t modulus() const { return p_; }

 private:
  std::uint64_t p_;  // largest safe prime below 2^lambda
  std::uint64_t q_;  // (p-1)/2, prime
  std::uint64_t g_;  // generator of the order-q subgroup
};

// Keyed-keystore scheme; k = lambda*ceil(log2 m).  Identity keys are
// derived from the master public key, so confidentiality against an
// adversary who knows this construction is nil; the interface semantics
// (completeness, randomized encryption, failure on wrong key) are exact.
class CompactIbe : public IbeScheme {
 public:
  CompactIbe(std::uint32_t m, std::size_t lambda);
  IbeSchemeKind kind() const override { return IbeSchemeKind::kCompact; }
  std::size_t key_bits() const override { return k_; }
  IbeKeyMaterial setup(RngStream& rng) const override;
  BitString keygen(const MasterSecret& msk, std::uint32_t id) const override;
  Ciphertext encrypt(const BitString& mpk, std::uint32_t id,
                     const std::vector<std::uint8_t>& bytes,
                     RngStream& rng) const override;
  std::optional<std::vector<std::uint8_t>> decrypt(const BitString& sk,
                                                   const Ciphertext& ct) const override;

 private:
  std::size_t k_;
  BitString expand_mpk(const MasterSecret& msk) const;
  mutable std::uint64_t cached_mpk_digest_ = 0;          // lazy per-mpk key cache
  mutable std::vector<std::uint64_t> cached_secrets_;    // id -> shared secret
  std::uint64_t identity_secret(const BitString& mpk, std::uint32_t id) const;
};

// --- Key material serialization (hex flat text) ---------------------------

void save_key_material(std::ostream& os, const IbeKeyMaterial& keys);
IbeKeyMaterial load_key_material(std::istream& is);

// --- IND-IBE distinguishing experiment ------------------------------------

// Oracle handle the adversary uses for identity-key queries; every query
// is recorded so the experiment can detect challenge-key abuse.
class KeygenOracle {
 public:
  KeygenOracle(const IbeScheme& scheme, const IbeKeyMaterial& keys)
      : scheme_(scheme), keys_(keys) {}
  BitString query(std::uint32_t id);
  const std::set<std::uint32_t>& queried() const { return queried_; }

 private:
  const IbeScheme& scheme_;
  const IbeKeyMaterial& keys_;
  std::set<std::uint32_t> queried_;
};

struct IndChallenge {
  std::uint32_t id_star = 0;
  std::vector<std::vector<std::uint8_t>> msgs0;
  std::vector<std::vector<std::uint8_t>> msgs1;
};

// Adversary in the distinguishing experiment.  The scheme reference gives
// access to the public algorithms only; key material stays behind the
// oracle.
class IndAdversary {
 public:
  virtual ~IndAdversary() = default;
  // Rule-breaking adversaries used for negative testing announce
  // themselves; the experiment then skips the challenge-key check.
  virtual bool may_query_challenge_key() const { return false; }
  virtual IndChallenge choose(const IbeScheme& scheme, const BitString& mpk,
                              KeygenOracle& oracle, RngStream& rng) = 0;
  virtual int guess(const IbeScheme& scheme, const BitString& mpk,
                    const std::vector<Ciphertext>& cts, KeygenOracle& oracle,
                    RngStream& rng) = 0;
};

struct IndOutcome {
  int win = 0;         // 1 iff the adversary guessed b
  bool aborted = false;  // true iff a non-test adversary queried id*
};

// One run of the distinguishing experiment.  `forced_b` pins the hidden
// bit (auditing hook used by the leak test); normally it is drawn after
// the adversary commits to its challenge.
IndOutcome ind_ibe_experiment(const IbeScheme& scheme, IndAdversary& adv,
                              RngStream& rng,
                              std::optional<int> forced_b = std::nullopt);

// Built-in adversaries.
std::unique_ptr<IndAdversary> make_random_guess_adversary();
std::unique_ptr<IndAdversary> make_key_abusing_adversary();   // rule-breaking, wins always
std::unique_ptr<IndAdversary> make_replay_distinguisher();    // generic, no challenge key

}  // namespace arena

#endif  // ARENA_IBE_HPP
