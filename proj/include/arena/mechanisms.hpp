#ifndef ARENA_MECHANISMS_HPP
#define ARENA_MECHANISMS_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "arena/game.hpp"

namespace arena {

// Empirical mean of the query over the sample set.
double empirical_answer(const SampleSet& samples, const Query& q);

// What a natural mechanism is allowed to see: the query's values on the
// sample points, nothing else.
struct NaturalView {
  std::vector<double> evals;  // evals[t] = q(x_t), in sample order
};

// Inner answer rule of a natural mechanism.  It consumes only the view,
// the round index and its own randomness; the query object itself is
// never exposed to it.
using NaturalInner =
    std::function<double(const NaturalView&, std::size_t round, RngStream&)>;

NaturalInner natural_mean_inner();  // mean of the view (= empirical answer)
NaturalInner natural_zero_inner();  // answers 0 regardless of the view

struct NoiseSchedule {
  double sigma = 0.0;
  bool clip = true;  // force noisy answers back into [-1,1]
};

// Default noise scale sqrt(rounds)*ln(n)/n.
double default_sigma(std::size_t n, std::size_t rounds);

// Empirical answer plus one Gaussian draw.  The pre-clip value is written
// to *preclip when given.
double gaussian_answer(const SampleSet& samples, const Query& q,
                       const NoiseSchedule& noise, RngStream& rng,
                       double* preclip = nullptr);

class EmpiricalMechanism : public Mechanism {
 public:
  void receive_samples(const SampleSet& samples) override { samples_ = samples; }
  double answer(const Query& q) override { return empirical_answer(samples_, q); }

 private:
  SampleSet samples_;
};

class GaussianMechanism : public Mechanism {
 public:
  GaussianMechanism(NoiseSchedule noise, std::uint64_t seed)
      : noise_(noise), rng_(seed) {}
  void receive_samples(const SampleSet& samples) override { samples_ = samples; }
  double answer(const Query& q) override;
  bool last_answer_clipped() const override { return last_clipped_; }
  const std::vector<double>& preclip_log() const { return preclip_log_; }

 private:
  NoiseSchedule noise_;
  RngStream rng_;
  SampleSet samples_;
  bool last_clipped_ = false;
  std::vector<double> preclip_log_;
};

// Answers the exact expectation q(D).  Referee-assisted and therefore not
// a legal mechanism in adversarial experiments; harness configurations
// must opt in explicitly.
class OracleMechanism : public Mechanism {
 public:
  void receive_samples(const SampleSet&) override {}
  bool wants_distribution() const override { return true; }
  void attach_distribution(const FiniteDistribution& d) override { d_ = &d; }
  double answer(const Query& q) override;

 private:
  const FiniteDistribution* d_ = nullptr;
};

// Adapter that turns an inner answer rule into a mechanism while
// enforcing naturalness structurally: the inner rule receives only the
// evaluated view.
class NaturalAdapter : public Mechanism {
 public:
  NaturalAdapter(NaturalInner inner, std::uint64_t seed)
      : inner_(std::move(inner)), rng_(seed) {}
  void receive_samples(const SampleSet& samples) override { samples_ = samples; }
  double answer(const Query& q) override;

 private:
  NaturalInner inner_;
  RngStream rng_;
  SampleSet samples_;
  std::size_t round_ = 0;
};

// Factory for the mechanisms selectable by name:
//   "empirical", "gaussian", "oracle", "natural:mean", "natural:zero".
// `sigma` < 0 means use default_sigma.  Selecting "oracle" requires
// allow_oracle (config guard).
MechanismFactory make_mechanism_factory(const std::string& name, double sigma,
                                        bool allow_oracle);

}  // namespace arena

#endif  // ARENA_MECHANISMS_HPP
