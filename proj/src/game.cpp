#include "arena/game.hpp"

#include <cmath>
#include <string>

namespace arena {

GameResult run_game_with(const PublicParams& params, const FiniteDistribution& d,
                         const SampleSet& samples, Analyst& analyst,
                         Mechanism& mechanism, const RunOptions& opts) {
  if (params.n == 0 || params.rounds == 0)
    throw ConfigError("run_game: n and rounds must be positive");
  if (d.domain() != params.domain)
    throw ConfigError("run_game: distribution domain mismatch");
  if (samples.size() != params.n)
    throw ConfigError("run_game: sample count mismatch");

  mechanism.receive_samples(samples);
  if (mechanism.wants_distribution()) mechanism.attach_distribution(d);

  GameResult result;
  result.transcript.n = params.n;
  result.transcript.rounds_planned = params.rounds;
  result.transcript.domain = params.domain;
  result.transcript.rounds.reserve(params.rounds);

  for (std::size_t i = 1; i <= params.rounds; ++i) {
    Query q = analyst.next_query(i);
    if (q.domain() != params.domain)
      throw ProtocolViolation("round " + std::to_string(i) +
                              ": query domain does not match the game domain");
    if (q.kind() == QueryKind::kTable && q.out_of_range())
      throw ProtocolViolation("round " + std::to_string(i) +
                              ": query value outside [-1,1]");

    RoundRecord rec;
    rec.kind = q.kind();
    rec.query_digest = q.digest();
    rec.true_answer = true_answer(q, d);

    double y = mechanism.answer(q);
    rec.clipped = mechanism.last_answer_clipped();
    if (!(y >= -1.0 && y <= 1.0)) {
      // NaN or out of range: force into the answer interval.
      if (std::isnan(y)) y = 0.0;
      y = y < -1.0 ? -1.0 : (y > 1.0 ? 1.0 : y);
      rec.clipped = true;
    }
    rec.answer = y;
    rec.error = std::fabs(y - rec.true_answer);

    if (rec.clipped) ++result.clipped_rounds;
    if (rec.error > result.max_error) result.max_error = rec.error;
    if (rec.error > kAccuracyBar && !result.first_failure_round)
      result.first_failure_round = i;

    result.transcript.rounds.push_back(rec);
    analyst.absorb(y);
    if (opts.record_queries) result.queries.push_back(q);
    if (i == params.rounds) result.last_query = std::move(q);
  }

  result.outcome = result.first_failure_round ? 1 : 0;
  return result;
}

GameResult run_game(const PublicParams& params, const AdversaryPair& adversary,
                    const MechanismFactory& mechanism_factory, GameSeeds seeds,
                    const RunOptions& opts) {
  auto analyst = adversary.make_analyst(params, seeds.analyst);
  auto sampler = adversary.make_sampler(params, seeds.sampler);
  auto [d, samples] = sampler->run(params.n);
  auto mechanism = mechanism_factory(params, seeds.mechanism);
  return run_game_with(params, d, samples, *analyst, *mechanism, opts);
}

}  // namespace arena
