#include "arena/ifpc.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "arena/query.hpp"

namespace arena {
namespace {

// z such that a centered score with per-round variance v stays below
// z*sqrt(v*round) for all of `rounds` rounds and all m entries, up to a
// 1/20 union-bound slack.
double union_bound_z(std::uint32_t m, std::size_t rounds) {
  double terms = 20.0 * static_cast<double>(m) * static_cast<double>(rounds);
  return std::sqrt(2.0 * std::log(terms));
}

}  // namespace

std::size_t default_attack_rounds(std::size_t n, std::uint32_t m) {
  if (n == 0 || m == 0) throw ConfigError("attack: n and m must be positive");
  // Guilty scores drift by (2/3)*h/n per round (h = sample multiplicity),
  // so crossing z*sqrt(v*R) with v = 2/(3n) needs R ~ z^2 * (3n/2) rounds
  // per entry; budget 2.5x that for the accusation cap to fill.  One
  // fixed-point pass resolves the mild R-dependence of z.
  double rounds = 100.0 * static_cast<double>(n);
  for (int pass = 0; pass < 2; ++pass) {
    double z = union_bound_z(m, static_cast<std::size_t>(rounds));
    rounds = std::ceil(2.5 * z * z * 1.5 * static_cast<double>(n));
  }
  return static_cast<std::size_t>(rounds) + 1;  // +1 for the final sign query
}

double default_attack_tau(std::size_t n, std::uint32_t m, std::size_t rounds) {
  if (n == 0 || m == 0 || rounds == 0)
    throw ConfigError("attack: n, m, rounds must be positive");
  double v = 2.0 / (3.0 * static_cast<double>(n));
  return union_bound_z(m, rounds) * std::sqrt(v);
}

IfpcAnalyst::IfpcAnalyst(std::size_t n, std::size_t rounds, std::uint32_t m,
                         const AttackConfig& config, std::uint64_t seed)
    : n_(n),
      rounds_(rounds),
      m_(m),
      tau_(config.tau > 0.0 ? config.tau : default_attack_tau(n, m, rounds)),
      cap_(config.accusation_cap > 0 ? config.accusation_cap : 2 * n),
      rng_(seed) {
  if (n_ == 0 || rounds_ == 0 || m_ == 0)
    throw ConfigError("attack: n, rounds, m must be positive");
  state_.scores.assign(m_, 0.0);
  state_.accused.assign(m_, 0);
  state_.accusation_round.assign(m_, 0);
  slope_decay_ = 1.0 - 1.0 / (2.0 * static_cast<double>(n_));
}

Query IfpcAnalyst::next_query(std::size_t round) {
  if (round != state_.round + 1)
    throw ProtocolViolation("attack analyst: rounds queried out of order");
  if (round < rounds_) return scoring_query_with_bias(rng_.uniform01());
  return final_query();
}

Query IfpcAnalyst::scoring_query_with_bias(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("attack: bias outside [0,1]");
  pending_.assign(m_, 0);
  std::vector<double> values(m_, 0.0);
  for (std::uint32_t j = 0; j < m_; ++j) {
    if (state_.accused[j]) continue;
    std::int8_t coin = rng_.bernoulli(p) ? 1 : -1;
    pending_[j] = coin;
    values[j] = coin;
  }
  pending_bias_ = p;
  pending_is_scoring_ = true;
  return Query::table(DomainSpec::index(m_), std::move(values),
                      /*validate=*/false);
}

Query IfpcAnalyst::final_query() {
  std::int8_t sigma = static_cast<std::int8_t>(rng_.sign());
  final_values_.assign(m_, 0);
  std::vector<double> values(m_, 0.0);
  for (std::uint32_t j = 0; j < m_; ++j) {
    if (state_.accused[j]) continue;
    final_values_[j] = sigma;
    values[j] = sigma;
  }
  pending_is_scoring_ = false;
  return Query::table(DomainSpec::index(m_), std::move(values),
                      /*validate=*/false);
}

void IfpcAnalyst::absorb(double answer) {
  if (pending_is_scoring_) {
    score_round(answer);
    pending_is_scoring_ = false;
    return;
  }
  state_.answers.push_back(answer);
}

void IfpcAnalyst::score_round(double answer) {
  state_.round += 1;
  double d = 2.0 * pending_bias_ - 1.0;
  double centered = answer - state_.slope * d;
  double threshold = tau_ * std::sqrt(static_cast<double>(state_.round));
  for (std::uint32_t j = 0; j < m_; ++j) {
    if (state_.accused[j]) continue;
    state_.scores[j] += static_cast<double>(pending_[j]) * centered;
    if (state_.scores[j] > threshold && state_.accused_count < cap_) {
      state_.accused[j] = 1;
      state_.accusation_round[j] = static_cast<std::uint32_t>(state_.round);
      state_.accused_count += 1;
    }
  }
  // Update the slope estimate only after scoring, so round r is centered
  // with a quantity computable from rounds < r.
  slope_num_ = slope_decay_ * slope_num_ + answer * d;
  slope_den_ = slope_decay_ * slope_den_ + d * d;
  state_.slope = std::clamp(slope_num_ / slope_den_, 0.0, 1.0);
  state_.biases.push_back(pending_bias_);
  state_.answers.push_back(answer);
}

const std::vector<std::int8_t>& IfpcAnalyst::final_inner_values() const {
  if (final_values_.empty())
    throw EvaluationError("attack view: no final query emitted");
  return final_values_;
}

UniformIndexSampler::UniformIndexSampler(std::uint32_t m, std::uint64_t seed)
    : m_(m), draw_rng_(derive_seed(seed, "a1/draw")) {
  if (m_ == 0) throw ConfigError("sampler: empty index universe");
}

std::pair<FiniteDistribution, SampleSet> UniformIndexSampler::run(std::size_t count) {
  if (used_) throw ProtocolViolation("sampler: one-shot sampler run twice");
  used_ = true;
  FiniteDistribution d = uniform_index_distribution(m_);
  SampleSet samples = d.sample_many(count, draw_rng_);
  return {std::move(d), std::move(samples)};
}

AdversaryPair make_ifpc_adversary(const AttackConfig& config) {
  AdversaryPair pair;
  std::uint32_t c = config.c;
  pair.make_sampler = [c](const PublicParams& params, std::uint64_t seed) {
    auto m = static_cast<std::uint32_t>(c * params.n);
    return std::make_unique<UniformIndexSampler>(m, seed);
  };
  pair.make_analyst = [config, c](const PublicParams& params, std::uint64_t seed) {
    auto m = static_cast<std::uint32_t>(c * params.n);
    if (params.domain != DomainSpec::index(m))
      throw ConfigError("attack: game domain must be the index universe [c*n]");
    return std::make_unique<IfpcAnalyst>(params.n, params.rounds, m, config, seed);
  };
  return pair;
}

double accusation_margin(const IfpcState& state, const SampleSet& samples,
                         std::size_t round) {
  if (samples.empty()) throw ConfigError("margin: empty sample set");
  std::size_t hit = 0;
  for (const Element& x : samples) {
    std::uint32_t r = state.accusation_round.at(x.index - 1);
    if (r != 0 && r <= round) hit += 1;
  }
  std::size_t accused_total = 0;
  for (std::uint32_t r : state.accusation_round)
    if (r != 0 && r <= round) accused_total += 1;
  return static_cast<double>(hit) / static_cast<double>(samples.size()) -
         static_cast<double>(accused_total) /
             static_cast<double>(state.accusation_round.size());
}

std::size_t reconstruction_round(const IfpcState& state, const SampleSet& samples) {
  // Accusations only happen at finitely many rounds; checking those is
  // enough because the margin is constant in between.
  std::vector<std::uint32_t> times;
  for (std::uint32_t r : state.accusation_round)
    if (r != 0) times.push_back(r);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  for (std::uint32_t r : times)
    if (accusation_margin(state, samples, r) > kAccuracyBar) return r;
  return 0;
}

}  // namespace arena
