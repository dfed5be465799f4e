#include "arena/balanced.hpp"

#include <bit>
#include <cmath>
#include <utility>

namespace arena {
namespace {

std::size_t ceil_log2(std::uint32_t m) {
  return std::bit_width(m - 1u);  // m >= 2 in all callers
}

}  // namespace

std::size_t scheme_key_bits(IbeSchemeKind kind, std::uint32_t m, std::size_t lambda) {
  if (m < 2) throw ConfigError("scheme: need at least two identities");
  switch (kind) {
    case IbeSchemeKind::kTrivialPke:
      return static_cast<std::size_t>(m) * lambda;
    case IbeSchemeKind::kCompact:
      return lambda * ceil_log2(m);
  }
  throw ConfigError("scheme: unknown kind");
}

DomainSpec balanced_domain(IbeSchemeKind kind, std::uint32_t m, std::size_t lambda) {
  return DomainSpec::triplet(m, scheme_key_bits(kind, m, lambda));
}

KeyedUniverse build_keyed_universe(IbeSchemeKind kind, std::uint32_t m,
                                   std::size_t lambda, std::uint64_t seed) {
  KeyedUniverse u;
  u.scheme = make_scheme(kind, m, lambda);
  RngStream keys_rng(derive_seed(seed, "a1/keys"));
  u.keys = u.scheme->setup(keys_rng);
  u.mpk = std::make_shared<const BitString>(u.keys.mpk);
  u.identity_keys.reserve(m);
  u.table.reserve(m);
  for (std::uint32_t j = 1; j <= m; ++j) {
    auto sk = std::make_shared<const BitString>(u.scheme->keygen(u.keys.msk, j));
    u.identity_keys.push_back(sk);
    u.table.push_back(Element{j, u.mpk, sk});
  }
  return u;
}

BalancedSampler::BalancedSampler(IbeSchemeKind kind, std::uint32_t m,
                                 std::size_t lambda, std::uint64_t seed)
    : kind_(kind), m_(m), lambda_(lambda), seed_(seed) {
  if (m_ < 2) throw ConfigError("sampler: need at least two identities");
}

std::pair<FiniteDistribution, SampleSet> BalancedSampler::run(std::size_t count) {
  if (used_) throw ProtocolViolation("sampler: one-shot sampler run twice");
  used_ = true;
  KeyedUniverse u = build_keyed_universe(kind_, m_, lambda_, seed_);
  FiniteDistribution d = FiniteDistribution::uniform(
      balanced_domain(kind_, m_, lambda_), std::move(u.table));
  RngStream draw_rng(derive_seed(seed_, "a1/draw"));
  SampleSet samples = d.sample_many(count, draw_rng);
  return {std::move(d), std::move(samples)};
}

BalancedAnalyst::BalancedAnalyst(const PublicParams& params, IbeSchemeKind kind,
                                 std::size_t lambda, const AttackConfig& attack,
                                 std::uint64_t seed)
    : params_(params),
      scheme_(make_scheme(kind, params.domain.m, lambda)),
      m_(params.domain.m),
      k_(params.domain.key_bits),
      recovered_(params.domain.key_bits),
      enc_rng_(derive_seed(seed, "a2/enc")) {
  if (params_.domain.kind != DomainSpec::Kind::kTriplet)
    throw ConfigError("balanced analyst: domain must be the triplet universe");
  if (k_ != scheme_->key_bits())
    throw ConfigError("balanced analyst: domain key width does not match scheme");
  if (params_.rounds <= k_)
    throw ConfigError("balanced analyst: round budget does not cover key recovery");
  inner_ = std::make_unique<IfpcAnalyst>(params_.n, params_.rounds - k_, m_, attack,
                                         derive_seed(seed, "a2/inner"));
}

Query BalancedAnalyst::next_query(std::size_t round) {
  if (round <= k_) {
    pending_is_bit_ = true;
    return Query::bit_projection(params_.domain, round - 1);
  }
  pending_is_bit_ = false;
  Query inner_q = inner_->next_query(round - k_);
  const std::vector<double>& values = inner_q.table_values();
  std::vector<Ciphertext> cts;
  cts.reserve(m_);
  for (std::uint32_t j = 1; j <= m_; ++j)
    cts.push_back(scheme_->encrypt_value(recovered_, j,
                                         static_cast<int>(values[j - 1]), enc_rng_));
  return Query::ciphertext_bundle(params_.domain, scheme_, std::move(cts));
}

void BalancedAnalyst::absorb(double answer) {
  if (pending_is_bit_) {
    recovered_.set_bit(bits_seen_, answer > 0.5);
    bits_seen_ += 1;
    pending_is_bit_ = false;
    return;
  }
  inner_->absorb(answer);
}

const std::vector<std::int8_t>& BalancedAnalyst::final_inner_values() const {
  return inner_->final_inner_values();
}

const BitString& BalancedAnalyst::recovered_mpk() const {
  if (bits_seen_ < k_)
    throw ProtocolViolation("balanced analyst: key recovery still in progress");
  return recovered_;
}

AdversaryPair make_balanced_adversary(const BalancedConfig& config) {
  AdversaryPair pair;
  BalancedConfig cfg = config;
  pair.make_sampler = [cfg](const PublicParams& params, std::uint64_t seed) {
    auto m = static_cast<std::uint32_t>(cfg.attack.c * params.n);
    return std::make_unique<BalancedSampler>(cfg.scheme, m, cfg.lambda, seed);
  };
  pair.make_analyst = [cfg](const PublicParams& params, std::uint64_t seed) {
    return std::make_unique<BalancedAnalyst>(params, cfg.scheme, cfg.lambda,
                                             cfg.attack, seed);
  };
  return pair;
}

PublicParams balanced_params(std::size_t n, const BalancedConfig& config,
                             std::size_t inner_rounds) {
  auto m = static_cast<std::uint32_t>(config.attack.c * n);
  if (inner_rounds == 0)
    inner_rounds = config.attack.rounds_budget > 0 ? config.attack.rounds_budget
                                                   : default_attack_rounds(n, m);
  DomainSpec domain = balanced_domain(config.scheme, m, config.lambda);
  return PublicParams{n, domain.key_bits + inner_rounds, domain};
}

NaturalizingMechanism::NaturalizingMechanism(const PublicParams& params,
                                             const BalancedConfig& config,
                                             MechanismFactory inner_factory,
                                             WrapVariant variant, std::uint64_t seed)
    : params_(params),
      config_(config),
      inner_factory_(std::move(inner_factory)),
      variant_(variant),
      seed_(seed),
      universe_(build_keyed_universe(config.scheme, params.domain.m, config.lambda,
                                     seed)),
      enc_rng_(derive_seed(seed, "m-tilde/enc")) {
  if (params_.domain.kind != DomainSpec::Kind::kIndex)
    throw ConfigError("naturalizing wrapper: outer domain must be the index universe");
}

void NaturalizingMechanism::receive_samples(const SampleSet& samples) {
  in_sample_.assign(params_.domain.m, 0);
  SampleSet triplets;
  triplets.reserve(samples.size());
  for (const Element& x : samples) {
    if (x.index == 0 || x.index > params_.domain.m)
      throw ProtocolViolation("naturalizing wrapper: sample index out of range");
    in_sample_[x.index - 1] = 1;
    triplets.push_back(universe_.table[x.index - 1]);
  }
  DomainSpec inner_domain = DomainSpec::triplet(params_.domain.m,
                                                universe_.scheme->key_bits());
  PublicParams inner_params{params_.n, params_.rounds + universe_.scheme->key_bits(),
                            inner_domain};
  inner_ = inner_factory_(inner_params, derive_seed(seed_, "m-tilde/inner"));
  inner_->receive_samples(triplets);
  if (inner_->wants_distribution()) {
    inner_dist_ = FiniteDistribution::uniform(inner_domain, universe_.table);
    inner_->attach_distribution(*inner_dist_);
  }
  // Replay the key-recovery rounds so the inner mechanism's state evolves
  // exactly as in the game it thinks it is playing.
  for (std::size_t i = 0; i < universe_.scheme->key_bits(); ++i)
    inner_->answer(Query::bit_projection(inner_domain, i));
}

double NaturalizingMechanism::answer(const Query& q) {
  if (!inner_) throw ProtocolViolation("naturalizing wrapper: no samples received");
  if (q.kind() != QueryKind::kTable)
    throw ProtocolViolation("naturalizing wrapper: expected a table query");
  const std::vector<double>& values = q.table_values();
  std::vector<Ciphertext> cts;
  cts.reserve(values.size());
  for (std::uint32_t j = 1; j <= params_.domain.m; ++j) {
    double v = values[j - 1];
    if (v != -1.0 && v != 0.0 && v != 1.0)
      throw ProtocolViolation("naturalizing wrapper: table must be ternary");
    int sent = (variant_ == WrapVariant::kHybrid || in_sample_[j - 1])
                   ? static_cast<int>(v)
                   : 0;
    cts.push_back(universe_.scheme->encrypt_value(*universe_.mpk, j, sent, enc_rng_));
  }
  DomainSpec inner_domain = DomainSpec::triplet(params_.domain.m,
                                                universe_.scheme->key_bits());
  return inner_->answer(
      Query::ciphertext_bundle(inner_domain, universe_.scheme, std::move(cts)));
}

bool NaturalizingMechanism::last_answer_clipped() const {
  return inner_ && inner_->last_answer_clipped();
}

MechanismFactory make_naturalizing_factory(const BalancedConfig& config,
                                           MechanismFactory inner_factory,
                                           WrapVariant variant) {
  return [config, inner_factory, variant](const PublicParams& params,
                                          std::uint64_t seed) {
    return std::make_unique<NaturalizingMechanism>(params, config, inner_factory,
                                                   variant, seed);
  };
}

WhiteboxMechanism::WhiteboxMechanism(KeyedUniverse universe)
    : universe_(std::move(universe)) {}

double WhiteboxMechanism::answer(const Query& q) {
  const std::uint32_t m = universe_.scheme->identity_count();
  switch (q.kind()) {
    case QueryKind::kBitProjection:
      return universe_.mpk->bit(q.bit_index()) ? 1.0 : 0.0;
    case QueryKind::kTable: {
      double sum = 0.0;
      for (double v : q.table_values()) sum += v;
      return sum / static_cast<double>(m);
    }
    case QueryKind::kCiphertextBundle: {
      double sum = 0.0;
      for (std::uint32_t j = 1; j <= m; ++j) {
        DecryptedValue dv = universe_.scheme->decrypt_value(
            *universe_.identity_keys[j - 1], q.bundle()[j - 1]);
        if (dv.ok) sum += dv.value;
      }
      return sum / static_cast<double>(m);
    }
  }
  throw EvaluationError("whitebox: unknown query kind");
}

}  // namespace arena
