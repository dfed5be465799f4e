#ifndef ARENA_BALANCED_HPP
#define ARENA_BALANCED_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "arena/game.hpp"
#include "arena/ibe.hpp"
#include "arena/ifpc.hpp"

namespace arena {

// Balanced form of the fingerprinting attack: the sampler publishes key
// material only through the samples, the analyst rebuilds the master
// public key from k bit-projection rounds and then drives the index
// attack through encrypted bundles.  The two halves never share state;
// everything they must agree on (the key material, the drawn sample
// indices) is derived from fixed seed tags so that paired runs can
// reproduce exactly the components two games are meant to share.
struct BalancedConfig {
  IbeSchemeKind scheme = IbeSchemeKind::kCompact;
  std::size_t lambda = 32;
  AttackConfig attack;  // c, inner rounds budget, tau, cap
};

// Key-length law of the two schemes at (m, lambda), without building one.
std::size_t scheme_key_bits(IbeSchemeKind kind, std::uint32_t m, std::size_t lambda);

// Triplet domain {1..m} x {0,1}^k x {0,1}^k with k matching the scheme.
DomainSpec balanced_domain(IbeSchemeKind kind, std::uint32_t m, std::size_t lambda);

// All key material of one identity universe, reproducible from a seed:
// setup and per-identity keygen run on the "a1/keys" stream of `seed`.
struct KeyedUniverse {
  std::shared_ptr<const IbeScheme> scheme;
  IbeKeyMaterial keys;
  std::shared_ptr<const BitString> mpk;
  std::vector<std::shared_ptr<const BitString>> identity_keys;  // [j-1] for id j
  SampleSet table;  // (j, mpk, sk_j) for j = 1..m
};

KeyedUniverse build_keyed_universe(IbeSchemeKind kind, std::uint32_t m,
                                   std::size_t lambda, std::uint64_t seed);

// A1: builds the keyed universe and draws samples uniformly from its
// table (streams "a1/keys" and "a1/draw").
class BalancedSampler : public Sampler {
 public:
  BalancedSampler(IbeSchemeKind kind, std::uint32_t m, std::size_t lambda,
                  std::uint64_t seed);
  std::pair<FiniteDistribution, SampleSet> run(std::size_t count) override;

 private:
  IbeSchemeKind kind_;
  std::uint32_t m_;
  std::size_t lambda_;
  std::uint64_t seed_;
  bool used_ = false;
};

// A2: k bit-projection rounds recover the master public key (bit = answer
// above 1/2, ties resolve down), then an embedded index attack runs with
// every query encrypted entrywise under the recovered key.  Streams:
// "a2/inner" seeds the embedded analyst, "a2/enc" the encryptions.
class BalancedAnalyst : public Analyst, public WrappedView {
 public:
  BalancedAnalyst(const PublicParams& params, IbeSchemeKind kind,
                  std::size_t lambda, const AttackConfig& attack,
                  std::uint64_t seed);

  Query next_query(std::size_t round) override;
  void absorb(double answer) override;

  const std::vector<std::int8_t>& final_inner_values() const override;
  std::uint32_t inner_m() const override { return m_; }

  const IfpcAnalyst& inner() const { return *inner_; }
  // Throws ProtocolViolation before all k bit rounds are absorbed.
  const BitString& recovered_mpk() const;

 private:
  PublicParams params_;
  std::shared_ptr<const IbeScheme> scheme_;
  std::uint32_t m_;
  std::size_t k_;
  std::size_t bits_seen_ = 0;
  bool pending_is_bit_ = false;
  BitString recovered_;
  std::unique_ptr<IfpcAnalyst> inner_;
  RngStream enc_rng_;
};

// Adversary pair over the triplet domain at blow-up attack.c.  The game
// must grant k extra rounds on top of the inner attack budget; use
// balanced_params to build consistent public parameters.
AdversaryPair make_balanced_adversary(const BalancedConfig& config);

// Public parameters for a balanced game: m = c*n identities, rounds =
// key_bits + inner_rounds (inner_rounds = 0 picks the attack default).
PublicParams balanced_params(std::size_t n, const BalancedConfig& config,
                             std::size_t inner_rounds = 0);

// Natural-game wrapper: runs an inner mechanism for the triplet game
// against emulated bit rounds, then forwards each ternary table query as
// an encrypted bundle.  The hybrid variant encrypts the true value at
// every identity and reproduces the balanced game exactly; the real
// variant encrypts 0 at identities outside its sample set, which an
// inner mechanism that only ever decrypts sample entries cannot detect.
enum class WrapVariant { kReal, kHybrid };

class NaturalizingMechanism : public Mechanism {
 public:
  // `params` are the natural game's parameters (index domain, inner
  // attack rounds); key material derives from the "a1/keys" stream of
  // `seed`, the inner mechanism from "m-tilde/inner", encryption
  // randomness from "m-tilde/enc".
  NaturalizingMechanism(const PublicParams& params, const BalancedConfig& config,
                        MechanismFactory inner_factory, WrapVariant variant,
                        std::uint64_t seed);

  void receive_samples(const SampleSet& samples) override;
  double answer(const Query& q) override;
  bool last_answer_clipped() const override;

  const Mechanism& inner() const { return *inner_; }

 private:
  PublicParams params_;
  BalancedConfig config_;
  MechanismFactory inner_factory_;
  WrapVariant variant_;
  std::uint64_t seed_;
  KeyedUniverse universe_;
  std::vector<char> in_sample_;  // [j-1]: identity j occurs in the sample set
  std::optional<FiniteDistribution> inner_dist_;  // only for opt-in inners
  std::unique_ptr<Mechanism> inner_;
  RngStream enc_rng_;
};

MechanismFactory make_naturalizing_factory(const BalancedConfig& config,
                                           MechanismFactory inner_factory,
                                           WrapVariant variant);

// Reference mechanism holding the full key material (obtainable only by
// rebuilding the sampler's universe outside the game, a deliberate leak
// for diagnostics): decrypts every bundle entry and answers every query
// with its exact expectation under the uniform table distribution.
class WhiteboxMechanism : public Mechanism {
 public:
  explicit WhiteboxMechanism(KeyedUniverse universe);
  void receive_samples(const SampleSet&) override {}
  double answer(const Query& q) override;

 private:
  KeyedUniverse universe_;
};

}  // namespace arena

#endif  // ARENA_BALANCED_HPP
