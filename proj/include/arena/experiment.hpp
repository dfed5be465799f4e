#ifndef ARENA_EXPERIMENT_HPP
#define ARENA_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arena/stats.hpp"

namespace arena {

// Named experiments the harness can run.  Each is a pure function of its
// configuration and master seed: per-trial seeds are derived as
// derive_seed(master, "trial", index), so parallel execution cannot
// reorder randomness and reruns are byte-identical.
enum class ExperimentKind {
  kNaturalAttack,    // fingerprinting attack over the index universe
  kBalancedAttack,   // same attack driven through the keyed triplet game
  kDpBaseline,       // noise-vs-attack contrast on paired seeds
  kApproxAgreement,  // two-party reading of the game, o1 vs o2
  kWeakKa,           // agreement + bucketing -> one key bit per trial
  kGlDecode,         // inner-product decoding from a noisy predictor
  kIbeSelftest,      // completeness / distinguishing checks of the schemes
};

const char* kind_name(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(std::string_view name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kNaturalAttack;
  std::size_t n = 50;        // samples (gl_decode: majority votes per bit)
  std::uint32_t c = 20;      // universe blow-up, m = c*n
  std::size_t rounds = 0;    // attack round budget; 0 = kind default
  double tau = 0.0;          // accusation threshold; 0 = default
  std::string mechanism = "empirical";
  double sigma = -1.0;       // gaussian noise scale; < 0 = default schedule
  bool allow_oracle = false;
  std::string ibe = "compact";
  std::size_t lambda = 32;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  double alpha = 0.01;       // weak-ka agreement radius
  double beta = 1.0;         // weak-ka eavesdropper radius
  double radius = 0.0;       // agreement radius; 0 = 2*n^(-1/10)
  double eve_radius = 0.05;  // eavesdropper hit radius
  std::size_t mb = 8;        // gl_decode index width
  double oracle_error = 0.24;
  std::size_t threads = 1;
  std::string out;           // CSV path; empty = $ADA_ARENA_OUT/<kind>.csv or none
};

// Aggregate over one batch of trials.  `csv` holds the full per-trial
// table (header + rows sorted by trial index); it never contains wall
// clock or host data, so a rerun with the same config is byte-identical.
struct TrialSummary {
  ExperimentKind kind = ExperimentKind::kNaturalAttack;
  std::size_t trials = 0;
  std::size_t successes = 0;  // primary per-kind success count
  std::size_t errors = 0;     // trials that threw (recorded per-row)
  double rate = 0.0;
  Interval wilson;            // 95% interval on the primary rate
  std::vector<std::pair<std::string, double>> metrics;  // extra aggregates
  // Per-trial diagnostic scalars (kind-specific; attacks: reconstruction
  // round and first failure round).
  std::vector<double> aux_a;
  std::vector<double> aux_b;
  std::string csv;
};

TrialSummary run_experiment(const ExperimentConfig& config);

// Resolves the output path (config.out, else $ADA_ARENA_OUT/<kind>.csv,
// else none), writes summary.csv there and returns the path; empty
// string = nothing written.
std::string write_csv(const ExperimentConfig& config, const TrialSummary& summary);

// Human-readable deterministic summary block.
std::string summary_text(const ExperimentConfig& config, const TrialSummary& summary);

// "<metric><op><value>" over the summary, e.g. "rate>=0.75"; metric is
// "rate" or any name in `metrics`; ops: >=, <=, >, <, ==.
bool check_assertion(const TrialSummary& summary, const std::string& expr);

// One attack batch per n; medians of the reconstruction and first-failure
// rounds support shape checks against the round budget.
struct SweepPoint {
  std::size_t n = 0;
  std::size_t rounds_budget = 0;
  double tau = 0.0;
  TrialSummary summary;
  double median_reconstruct = 0.0;
  double median_first_failure = 0.0;
};
struct SweepResult {
  std::vector<SweepPoint> points;
  std::string csv;
};
SweepResult run_sweep(const ExperimentConfig& base, const std::vector<std::size_t>& ns);

// Success rate across a grid of multipliers of the default accusation
// threshold; recommends the best-performing tau (ties to the larger,
// more conservative value).
struct CalibrationPoint {
  double multiplier = 0.0;
  double tau = 0.0;
  double rate = 0.0;
  double median_reconstruct = 0.0;
};
struct CalibrationResult {
  std::vector<CalibrationPoint> points;
  double recommended_tau = 0.0;
  std::string csv;
};
CalibrationResult run_calibration(const ExperimentConfig& base,
                                  std::vector<double> multipliers = {});

}  // namespace arena

#endif  // ARENA_EXPERIMENT_HPP
