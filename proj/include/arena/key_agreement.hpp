#ifndef ARENA_KEY_AGREEMENT_HPP
#define ARENA_KEY_AGREEMENT_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "arena/game.hpp"
#include "arena/ifpc.hpp"

namespace arena {

// --- Approximate agreement ------------------------------------------------
//
// The game is re-read as a two-party protocol: the sampler draws 2n
// points, the first n play an ordinary game against the mechanism, and at
// the end the mechanism's side evaluates the final query on the held-out
// half (o1) while the analyst's side extracts its intended value for that
// query from its own view (o2).  After a successful reconstruction both
// land near the same point, while a transcript eavesdropper only sees
// answers computed on the played half, whose accused mass is the whole
// point of the attack.

// Mean of the final wrapped query over the index universe: the analyst's
// closed form for what an untouched sample of the base distribution would
// answer.  Integer accumulation, so algebraically equal views extract
// bit-identical values.
double extract_agreement_value(const WrappedView& view);

struct AgreementResult {
  GameResult game;
  double o1 = 0.0;          // held-out empirical answer to the final query
  double o2 = 0.0;          // analyst-side extraction
  double true_final = 0.0;  // exact expectation of the final query under D
  SampleSet heldout;
};

// Runs the protocol.  The first n of the sampler's 2n draws are exactly
// the n it would produce in a plain game with the same seeds, and the
// referee loop is shared, so `game` is bit-identical to the run_game
// transcript for the same (params, adversary, mechanism, seeds).  The
// analyst must implement WrappedView.
AgreementResult run_approx_agreement(const PublicParams& params,
                                     const AdversaryPair& adversary,
                                     const MechanismFactory& mechanism_factory,
                                     GameSeeds seeds, const RunOptions& opts = {});

// Transcript-only adversaries trying to land within the agreement radius
// of o1.
using Eavesdropper = std::function<double(const Transcript&)>;
Eavesdropper make_echo_eavesdropper();         // repeats the final answer
Eavesdropper make_answer_mean_eavesdropper();  // averages all answers

// --- Weak key agreement over one noisy shared scalar ----------------------
//
// Both parties hold values within alpha of each other; an eavesdropper
// knows them only within beta.  A shared random shift v in [0, gamma]
// (gamma = sqrt(alpha*beta)) is applied, the shifted value is snapped to
// a grid of granularity gamma, and the key bit is an inner product of the
// grid index with a public random mask.  The grid granularity is rounded
// to a dyadic value so both parties compute identical buckets from
// identical inputs on any IEEE-754 machine.

struct Bucketing {
  double gamma = 0.0;        // sqrt(alpha*beta) before rounding
  double gamma_tilde = 0.0;  // dyadic granularity actually used
  std::size_t mb = 0;        // index width in bits
  std::size_t bucket_count = 0;
};

// alpha, beta in (0, 1] with alpha <= beta.
Bucketing make_bucketing(double alpha, double beta);

// Nearest bucket center -1 + t*gamma_tilde to x; ties resolve to the
// lower index, values beyond the ends snap to the end buckets.
std::uint32_t bucketize(double x, const Bucketing& b);

struct WeakKaResult {
  double shift = 0.0;        // v
  std::uint32_t mask = 0;    // r
  std::uint32_t bucket1 = 0;
  std::uint32_t bucket2 = 0;
  int bit1 = 0;
  int bit2 = 0;
  bool agree = false;
};

// One protocol round on values o1, o2: draws the public shift v uniform
// on [0, gamma_tilde] and the mb-bit mask r (low bit first), then
// bit_i = <bucket(o_i + v), r> mod 2.
WeakKaResult run_weak_ka(double o1, double o2, const Bucketing& b, RngStream& rng);

// --- Goldreich-Levin inner-product decoding -------------------------------

// Predictor for r -> <s, r> mod 2 with r an mb-bit mask.
using GlOracle = std::function<int(std::uint32_t r)>;

GlOracle make_exact_oracle(std::uint32_t s);
// Correct answer flipped with probability `error` per call.
GlOracle make_noisy_oracle(std::uint32_t s, double error, std::uint64_t seed);
// Ignores r entirely.
GlOracle make_coin_oracle(std::uint64_t seed);

// Recovers s bit by bit: bit i is the majority over `queries` random
// masks r of oracle(r) xor oracle(r ^ (1 << i)); ties resolve to 0.
// Works whenever the oracle's error rate is bounded away from 1/2.
std::uint32_t gl_decode(const GlOracle& oracle, std::size_t mb,
                        std::size_t queries, RngStream& rng);

struct GlKaResult {
  std::uint32_t true_bucket = 0;
  std::uint32_t recovered_bucket = 0;
  double estimate = 0.0;  // recovered bucket center, shift removed
  bool exact = false;     // recovered == true bucket
  bool close = false;     // |estimate - o1| <= 2 * gamma_tilde
};

// What a key-bit predictor buys an eavesdropper: decoding the bucket of
// o1 + v from bit predictions alone pins o1 down to two grid steps.
GlKaResult gl_attack_ka(double o1, const Bucketing& b, double shift,
                        const GlOracle& oracle, std::size_t queries,
                        RngStream& rng);

}  // namespace arena

#endif  // ARENA_KEY_AGREEMENT_HPP
