#ifndef ARENA_IFPC_HPP
#define ARENA_IFPC_HPP

#include <cstdint>
#include <vector>

#include "arena/game.hpp"
#include "arena/mechanisms.hpp"

namespace arena {

// Interactive fingerprinting attack against mean-like mechanisms.
//
// Each scoring round draws a column bias p uniform on [0,1] and queries a
// random {-1,+1} table (+1 with probability p) with accused entries fixed
// to 0.  Scores accumulate q(j) * (y - rho * (2p-1)), where rho is a
// running estimate of the mechanism's response slope; entries whose
// score crosses tau*sqrt(round) are accused, up to a cap.  The last round
// spends a sign query that is 0 on accused entries, so a mechanism that
// kept answering from a sample set overlapping the accused set errs by
// about the accused sample mass.
//
// The slope estimate generalizes the fixed centering y - (2p-1): a
// mean-like mechanism's response to the bias flattens as accused sample
// entries are zeroed, and centering on the estimated slope keeps guilty
// drift at (2/3)*h/n per round (h = sample multiplicity) while innocent
// scores stay centered.  rho is updated only after a round is scored, so
// each round is centered with a quantity measurable from previous rounds.
struct AttackConfig {
  std::uint32_t c = 2000;          // support blow-up: m = c * n
  std::size_t rounds_budget = 0;   // total rounds incl. final; 0 = default
  double tau = 0.0;                // accusation threshold; 0 = default
  std::size_t accusation_cap = 0;  // 0 = 2n
};

// Default round budget / threshold for the attack at (n, m).  Frozen from
// the calibration sweep (tools: calibrate); see docs for the derivation.
std::size_t default_attack_rounds(std::size_t n, std::uint32_t m);
double default_attack_tau(std::size_t n, std::uint32_t m, std::size_t rounds);

// Mutable attack state, exposed for inspection by tests and diagnostics.
struct IfpcState {
  std::vector<double> scores;               // per index j (0-based j-1)
  std::vector<char> accused;                // 1 once accused, never cleared
  std::vector<std::uint32_t> accusation_round;  // 0 = never accused
  std::size_t accused_count = 0;
  std::size_t round = 0;                    // completed (scored) rounds
  std::vector<double> biases;               // p per scoring round
  std::vector<double> answers;              // mechanism answer per round
  double slope = 1.0;                       // current response-slope estimate
};

// Read side of a wrapped analyst used by the agreement extractor: the
// values of the final inner query over [m].
class WrappedView {
 public:
  virtual ~WrappedView() = default;
  // Throws EvaluationError when no final query was emitted yet.
  virtual const std::vector<std::int8_t>& final_inner_values() const = 0;
  virtual std::uint32_t inner_m() const = 0;
};

class IfpcAnalyst : public Analyst, public WrappedView {
 public:
  // `rounds` is the total budget including the final sign query.
  IfpcAnalyst(std::size_t n, std::size_t rounds, std::uint32_t m,
              const AttackConfig& config, std::uint64_t seed);

  Query next_query(std::size_t round) override;
  void absorb(double answer) override;

  // Deterministic core of a scoring round at a given bias; coin draws
  // still come from the analyst's stream.
  Query scoring_query_with_bias(double p);
  Query final_query();

  const IfpcState& state() const { return state_; }
  const std::vector<std::int8_t>& pending_values() const { return pending_; }
  const std::vector<std::int8_t>& final_inner_values() const override;
  std::uint32_t inner_m() const override { return m_; }

 private:
  std::size_t n_;
  std::size_t rounds_;
  std::uint32_t m_;
  double tau_;
  std::size_t cap_;
  RngStream rng_;
  IfpcState state_;
  std::vector<std::int8_t> pending_;  // values of the query awaiting its answer
  double pending_bias_ = 0.0;
  bool pending_is_scoring_ = false;
  std::vector<std::int8_t> final_values_;
  double slope_num_ = 1.0;  // EMA accumulators behind state_.slope
  double slope_den_ = 1.0;
  double slope_decay_ = 1.0;

  void score_round(double answer);
};

// Uniform sampler over the index universe [m]; the A1 half of the natural
// attack adversary.  Draws come from the "a1/draw" stream of `seed`.
class UniformIndexSampler : public Sampler {
 public:
  UniformIndexSampler(std::uint32_t m, std::uint64_t seed);
  std::pair<FiniteDistribution, SampleSet> run(std::size_t count) override;

 private:
  std::uint32_t m_;
  RngStream draw_rng_;
  bool used_ = false;
};

// Adversary pair for the natural attack at blow-up c: sampler uniform on
// [c*n], analyst the fingerprinting attack.
AdversaryPair make_ifpc_adversary(const AttackConfig& config);

// Fraction of the sample multiset whose index is accused by round r
// (inclusive), minus the accused share of [m]; the final sign query's
// error against a mean-like mechanism is close to this margin.
double accusation_margin(const IfpcState& state, const SampleSet& samples,
                         std::size_t round);

// First round at which the margin exceeds the accuracy bar, or 0.
std::size_t reconstruction_round(const IfpcState& state, const SampleSet& samples);

}  // namespace arena

#endif  // ARENA_IFPC_HPP
