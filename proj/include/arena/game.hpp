#ifndef ARENA_GAME_HPP
#define ARENA_GAME_HPP

#include <functional>
#include <memory>
#include <utility>

#include "arena/domain.hpp"
#include "arena/query.hpp"
#include "arena/rng.hpp"
#include "arena/transcript.hpp"

namespace arena {

// Public parameters of one game, known to every participant.
struct PublicParams {
  std::size_t n = 0;       // sample count
  std::size_t rounds = 0;  // query budget (the reported round count)
  DomainSpec domain;
};

// The analyst half of an adversary: emits one query per round and absorbs
// the mechanism's answer.  It never sees the sampler's state.
class Analyst {
 public:
  virtual ~Analyst() = default;
  virtual Query next_query(std::size_t round) = 0;  // rounds are 1-based
  virtual void absorb(double answer) = 0;
};

// The sampler half: builds the input distribution and draws the samples
// that go to the mechanism.  `count` is n in a game; protocol emulations
// may ask for more draws from the same distribution.  Samplers are
// one-shot objects: they derive their internal streams from the factory
// seed with fixed tags (so paired runs can reproduce exactly the
// components they share) and `run` may be called once.
class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual std::pair<FiniteDistribution, SampleSet> run(std::size_t count) = 0;
};

class Mechanism {
 public:
  virtual ~Mechanism() = default;
  virtual void receive_samples(const SampleSet& samples) = 0;
  virtual double answer(const Query& q) = 0;
  // True when the mechanism's own answer path clipped the last value.
  virtual bool last_answer_clipped() const { return false; }
  // Referee-assisted hook; only the true-mean oracle opts in, and only
  // test/diagnostic configurations may select that mechanism.
  virtual bool wants_distribution() const { return false; }
  virtual void attach_distribution(const FiniteDistribution&) {}
};

// The two halves of a balanced adversary are created by independent
// factories; the referee gives them disjoint seed streams and never moves
// information between them.
struct AdversaryPair {
  std::function<std::unique_ptr<Sampler>(const PublicParams&, std::uint64_t seed)>
      make_sampler;
  std::function<std::unique_ptr<Analyst>(const PublicParams&, std::uint64_t seed)>
      make_analyst;
};

using MechanismFactory =
    std::function<std::unique_ptr<Mechanism>(const PublicParams&, std::uint64_t seed)>;

// Named seed streams of one game run, all derived from a master seed with
// fixed tags so paired runs can share exactly the components they should.
struct GameSeeds {
  std::uint64_t sampler = 0;
  std::uint64_t analyst = 0;
  std::uint64_t mechanism = 0;
  static GameSeeds from_master(std::uint64_t master) {
    return {derive_seed(master, "game/sampler"), derive_seed(master, "game/analyst"),
            derive_seed(master, "game/mechanism")};
  }
};

struct RunOptions {
  bool record_queries = false;  // keep full query objects in the result
};

// Referee loop over a prepared distribution and sample set.
GameResult run_game_with(const PublicParams& params, const FiniteDistribution& d,
                         const SampleSet& samples, Analyst& analyst,
                         Mechanism& mechanism, const RunOptions& opts = {});

// Full game: sampler draws n samples, then the referee loop runs.
GameResult run_game(const PublicParams& params, const AdversaryPair& adversary,
                    const MechanismFactory& mechanism_factory, GameSeeds seeds,
                    const RunOptions& opts = {});

}  // namespace arena

#endif  // ARENA_GAME_HPP
