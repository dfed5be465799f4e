#include "arena/key_agreement.hpp"

#include <bit>
#include <cmath>
#include <memory>

#include "arena/mechanisms.hpp"

namespace arena {
namespace {

constexpr double kDyadicScale = 67108864.0;  // 2^26

std::uint32_t low_mask(std::size_t mb) {
  return mb >= 32 ? 0xffffffffu
                  : static_cast<std::uint32_t>((1u << mb) - 1u);
}

}  // namespace

double extract_agreement_value(const WrappedView& view) {
  const std::vector<std::int8_t>& values = view.final_inner_values();
  long long sum = 0;
  for (std::int8_t v : values) sum += v;
  return static_cast<double>(sum) / static_cast<double>(values.size());
}

AgreementResult run_approx_agreement(const PublicParams& params,
                                     const AdversaryPair& adversary,
                                     const MechanismFactory& mechanism_factory,
                                     GameSeeds seeds, const RunOptions& opts) {
  auto analyst = adversary.make_analyst(params, seeds.analyst);
  auto sampler = adversary.make_sampler(params, seeds.sampler);
  auto [d, both] = sampler->run(2 * params.n);
  SampleSet played(both.begin(), both.begin() + static_cast<std::ptrdiff_t>(params.n));
  AgreementResult result;
  result.heldout.assign(both.begin() + static_cast<std::ptrdiff_t>(params.n),
                        both.end());
  auto mechanism = mechanism_factory(params, seeds.mechanism);
  result.game = run_game_with(params, d, played, *analyst, *mechanism, opts);
  auto* view = dynamic_cast<const WrappedView*>(analyst.get());
  if (view == nullptr)
    throw ConfigError("agreement: analyst does not expose a wrapped view");
  result.o1 = empirical_answer(result.heldout, *result.game.last_query);
  result.o2 = extract_agreement_value(*view);
  result.true_final = result.game.transcript.rounds.back().true_answer;
  return result;
}

Eavesdropper make_echo_eavesdropper() {
  return [](const Transcript& t) {
    if (t.rounds.empty()) throw ConfigError("eavesdropper: empty transcript");
    return t.rounds.back().answer;
  };
}

Eavesdropper make_answer_mean_eavesdropper() {
  return [](const Transcript& t) {
    if (t.rounds.empty()) throw ConfigError("eavesdropper: empty transcript");
    double sum = 0.0;
    for (const RoundRecord& r : t.rounds) sum += r.answer;
    return sum / static_cast<double>(t.rounds.size());
  };
}

Bucketing make_bucketing(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || alpha > beta)
    throw ConfigError("bucketing: need 0 < alpha <= beta");
  Bucketing b;
  b.gamma = std::sqrt(alpha * beta);
  b.gamma_tilde = static_cast<double>(std::llround(b.gamma * kDyadicScale)) /
                  kDyadicScale;
  if (!(b.gamma_tilde > 0.0))
    throw ConfigError("bucketing: granularity underflows the dyadic grid");
  if (b.gamma_tilde >= 2.0)
    throw ConfigError("bucketing: granularity >= 2 collapses the bucket set");
  b.mb = static_cast<std::size_t>(std::ceil(std::log2(2.0 / b.gamma)));
  if (b.mb == 0) b.mb = 1;
  b.bucket_count = static_cast<std::size_t>(std::floor(2.0 / b.gamma_tilde)) + 1;
  // The count can just exceed a power of two (e.g. gamma an exact power of
  // 1/2); one extra index bit always suffices.
  if (b.bucket_count > (std::size_t{1} << b.mb)) b.mb += 1;
  if (b.mb > 32) throw ConfigError("bucketing: more than 32 index bits");
  return b;
}

std::uint32_t bucketize(double x, const Bucketing& b) {
  double u = (x + 1.0) / b.gamma_tilde;
  double t = std::floor(u + 0.5);
  if (u + 0.5 == t) t -= 1.0;  // exact midpoint: take the lower bucket
  if (t < 0.0) t = 0.0;
  double top = static_cast<double>(b.bucket_count - 1);
  if (t > top) t = top;
  return static_cast<std::uint32_t>(t);
}

WeakKaResult run_weak_ka(double o1, double o2, const Bucketing& b, RngStream& rng) {
  WeakKaResult r;
  r.shift = rng.uniform01() * b.gamma_tilde;
  for (std::size_t i = 0; i < b.mb; ++i)
    r.mask |= static_cast<std::uint32_t>(rng.bit()) << i;
  r.bucket1 = bucketize(o1 + r.shift, b);
  r.bucket2 = bucketize(o2 + r.shift, b);
  r.bit1 = static_cast<int>(std::popcount(r.bucket1 & r.mask) & 1u);
  r.bit2 = static_cast<int>(std::popcount(r.bucket2 & r.mask) & 1u);
  r.agree = r.bit1 == r.bit2;
  return r;
}

GlOracle make_exact_oracle(std::uint32_t s) {
  return [s](std::uint32_t r) {
    return static_cast<int>(std::popcount(s & r) & 1u);
  };
}

GlOracle make_noisy_oracle(std::uint32_t s, double error, std::uint64_t seed) {
  if (!(error >= 0.0 && error <= 1.0))
    throw ConfigError("oracle: error rate outside [0,1]");
  auto rng = std::make_shared<RngStream>(seed);
  return [s, error, rng](std::uint32_t r) {
    int truth = static_cast<int>(std::popcount(s & r) & 1u);
    return rng->bernoulli(error) ? 1 - truth : truth;
  };
}

GlOracle make_coin_oracle(std::uint64_t seed) {
  auto rng = std::make_shared<RngStream>(seed);
  return [rng](std::uint32_t) { return static_cast<int>(rng->bit()); };
}

std::uint32_t gl_decode(const GlOracle& oracle, std::size_t mb,
                        std::size_t queries, RngStream& rng) {
  if (mb == 0 || mb > 32) throw ConfigError("gl_decode: mb must be in [1,32]");
  if (queries == 0) throw ConfigError("gl_decode: need at least one query");
  std::uint32_t mask = low_mask(mb);
  std::uint32_t s = 0;
  for (std::size_t i = 0; i < mb; ++i) {
    std::size_t ones = 0;
    for (std::size_t q = 0; q < queries; ++q) {
      std::uint32_t r = static_cast<std::uint32_t>(rng.next_u64()) & mask;
      ones += static_cast<std::size_t>(oracle(r) ^
                                       oracle(r ^ (std::uint32_t{1} << i)));
    }
    if (2 * ones > queries) s |= std::uint32_t{1} << i;  // ties resolve to 0
  }
  return s;
}

GlKaResult gl_attack_ka(double o1, const Bucketing& b, double shift,
                        const GlOracle& oracle, std::size_t queries,
                        RngStream& rng) {
  GlKaResult r;
  r.true_bucket = bucketize(o1 + shift, b);
  r.recovered_bucket = gl_decode(oracle, b.mb, queries, rng);
  r.estimate = -1.0 + static_cast<double>(r.recovered_bucket) * b.gamma_tilde - shift;
  r.exact = r.recovered_bucket == r.true_bucket;
  r.close = std::fabs(r.estimate - o1) <= 2.0 * b.gamma_tilde;
  return r;
}

}  // namespace arena
