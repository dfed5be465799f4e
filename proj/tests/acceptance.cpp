// Headline acceptance batch.  Each test case exercises one published
// target at its stated parameters and prints a single [PASS]/[FAIL]
// line with the measured numbers, so a plain run of this binary reads
// as a ten-line scorecard.  Thresholds are pinned inline; tolerances
// are part of the statement, not tuning knobs.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "arena/balanced.hpp"
#include "arena/experiment.hpp"
#include "arena/ibe.hpp"
#include "arena/key_agreement.hpp"
#include "arena/mechanisms.hpp"
#include "doctest.h"

using namespace arena;

namespace {

std::size_t pool_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void report(int num, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", num, detail.c_str());
  std::fflush(stdout);
}

std::string fmt3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

double metric(const TrialSummary& s, const char* name) {
  for (const auto& [k, v] : s.metrics)
    if (k == name) return v;
  REQUIRE_MESSAGE(false, "missing metric " << name);
  return 0.0;
}

MechanismFactory empirical_factory() {
  return [](const PublicParams&, std::uint64_t) {
    return std::make_unique<EmpiricalMechanism>();
  };
}

}  // namespace

TEST_CASE("criterion 1: natural attack beats the empirical mechanism") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kNaturalAttack;
  cfg.n = 50;
  cfg.c = 20;
  cfg.trials = 200;
  cfg.seed = 101;
  cfg.threads = pool_threads();
  const TrialSummary s = run_experiment(cfg);
  const bool ok = s.errors == 0 && s.rate >= 0.75 && s.wilson.lo >= 0.70;
  report(1, ok,
         "natural attack, n=50 c=20, 200 trials: rate " + fmt3(s.rate) +
             " (need >= 0.75), Wilson lower " + fmt3(s.wilson.lo) + " (need >= 0.70)");
  CHECK(s.errors == 0);
  CHECK(s.rate >= 0.75);
  CHECK(s.wilson.lo >= 0.70);
}

TEST_CASE("criterion 2: balanced attack matches through the keyed game") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kBalancedAttack;
  cfg.n = 50;
  cfg.c = 20;
  cfg.ibe = "compact";
  cfg.lambda = 32;
  cfg.trials = 100;
  cfg.seed = 102;
  cfg.threads = pool_threads();
  const TrialSummary s = run_experiment(cfg);
  const bool ok = s.errors == 0 && s.rate >= 0.75;
  report(2, ok,
         "balanced attack, compact scheme lambda=32, n=50 c=20, 100 trials: rate " +
             fmt3(s.rate) + " (need >= 0.75)");
  CHECK(s.errors == 0);
  CHECK(s.rate >= 0.75);
}

TEST_CASE("criterion 3: the true-mean oracle never fails") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kNaturalAttack;
  cfg.mechanism = "oracle";
  cfg.allow_oracle = true;
  cfg.n = 50;
  cfg.c = 20;
  cfg.trials = 100;
  cfg.seed = 103;
  cfg.threads = pool_threads();
  const TrialSummary s = run_experiment(cfg);
  const bool ok = s.errors == 0 && s.successes == 0;
  report(3, ok,
         "oracle mechanism, 100 trials of the full attack: failures " +
             std::to_string(s.successes) + " (need exactly 0)");
  CHECK(s.errors == 0);
  CHECK(s.successes == 0);
}

TEST_CASE("criterion 4: noise-calibrated baseline contrast") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kDpBaseline;
  cfg.n = 200;
  cfg.c = 20;
  cfg.trials = 100;
  cfg.seed = 104;
  cfg.threads = pool_threads();
  const TrialSummary s = run_experiment(cfg);
  const double gaussian = s.rate;  // gaussian_fail_rate aliases the primary rate
  const double empirical = metric(s, "empirical_fail_rate");
  const double sigma = std::sqrt(static_cast<double>(cfg.n)) *
                       std::log(static_cast<double>(cfg.n)) /
                       static_cast<double>(cfg.n);
  const double per_round = std::erfc(0.1 / (sigma * std::sqrt(2.0)));
  const bool ok = s.errors == 0 && gaussian <= 0.25 && empirical >= 0.60;
  report(4, ok,
         "gaussian mechanism at sigma=" + fmt3(sigma) +
             ", n=200, 100 trials: fail rate " + fmt3(gaussian) +
             " (target <= 0.25; unreachable at this scale, since sigma far "
             "exceeds the 0.1 accuracy bar: per-round P(|noise| > 0.1) = " +
             fmt3(per_round) + ", so 200 rounds fail almost surely); "
             "empirical mechanism fail rate " +
             fmt3(empirical) + " (need >= 0.60)");
  CHECK(s.errors == 0);
  CHECK(gaussian <= 0.25);  // known red: the noise scale alone forces failure
  CHECK(empirical >= 0.60);
}

TEST_CASE("criterion 5: encryption round-trips exhaustively and key lengths obey their laws") {
  std::size_t roundtrip_fails = 0;
  std::size_t value_fails = 0;
  std::size_t length_fails = 0;
  for (IbeSchemeKind kind : {IbeSchemeKind::kTrivialPke, IbeSchemeKind::kCompact}) {
    const auto scheme = make_scheme(kind, 64, 16);
    RngStream rng(kind == IbeSchemeKind::kTrivialPke ? 105 : 1105);
    const IbeKeyMaterial keys = scheme->setup(rng);
    for (std::uint32_t id = 1; id <= 64; ++id) {
      const BitString sk = scheme->keygen(keys.msk, id);
      for (int byte = 0; byte < 256; ++byte) {
        const std::vector<std::uint8_t> msg{static_cast<std::uint8_t>(byte)};
        const Ciphertext ct = scheme->encrypt(keys.mpk, id, msg, rng);
        const auto back = scheme->decrypt(sk, ct);
        if (!back || *back != msg) ++roundtrip_fails;
      }
      for (int value : {-1, 0, 1}) {
        const Ciphertext ct = scheme->encrypt_value(keys.mpk, id, value, rng);
        const DecryptedValue got = scheme->decrypt_value(sk, ct);
        if (!got.ok || got.value != value) ++value_fails;
      }
    }
    for (std::size_t lambda : {16u, 32u, 64u}) {
      const auto sized = make_scheme(kind, 64, lambda);
      RngStream lrng(2000 + lambda);
      const std::size_t expect =
          kind == IbeSchemeKind::kTrivialPke ? 64 * lambda : lambda * 6;
      if (sized->key_bits() != expect) ++length_fails;
      if (sized->setup(lrng).mpk.size() != expect) ++length_fails;
    }
  }
  const bool ok = roundtrip_fails == 0 && value_fails == 0 && length_fails == 0;
  report(5, ok,
         "both schemes at m=64: 64*256 byte round-trips and 64*3 value "
         "round-trips each, failures " +
             std::to_string(roundtrip_fails + value_fails) +
             " (need 0); mpk-length law violations at lambda in {16,32,64}: " +
             std::to_string(length_fails) + " (need 0)");
  CHECK(roundtrip_fails == 0);
  CHECK(value_fails == 0);
  CHECK(length_fails == 0);
}

TEST_CASE("criterion 6: wrapped and inner games agree exactly on paired seeds") {
  std::size_t answer_mismatches = 0;
  std::size_t transcript_mismatches = 0;
  std::size_t runs = 0;
  for (std::uint64_t w = 600; w < 620; ++w, ++runs) {
    BalancedConfig cfg;
    cfg.scheme = IbeSchemeKind::kCompact;
    cfg.lambda = 16;
    cfg.attack.c = 4;
    cfg.attack.rounds_budget = 60;

    // The balanced game and the hybrid-wrapped natural game on matched
    // seed wiring must produce the same true answer on every wrapped
    // round: the analyst's bundle over the keyed universe means exactly
    // what its inner query means over the index universe.
    const PublicParams bal_params = balanced_params(8, cfg, 60);
    const std::size_t k = bal_params.domain.key_bits;
    const GameResult balanced =
        run_game(bal_params, make_balanced_adversary(cfg), empirical_factory(),
                 GameSeeds{w, w, derive_seed(w, "m-tilde/inner")});
    const PublicParams nat_params{8, 60, DomainSpec::index(32)};
    const GameSeeds nat_seeds{w, derive_seed(w, "a2/inner"), w};
    const GameResult hybrid =
        run_game(nat_params, make_ifpc_adversary(cfg.attack),
                 make_naturalizing_factory(cfg, empirical_factory(), WrapVariant::kHybrid),
                 nat_seeds);
    REQUIRE(balanced.transcript.rounds.size() == k + 60);
    REQUIRE(hybrid.transcript.rounds.size() == 60);
    for (std::size_t i = 0; i < 60; ++i) {
      if (balanced.transcript.rounds[k + i].true_answer !=
          hybrid.transcript.rounds[i].true_answer)
        ++answer_mismatches;
    }

    // Real wrapping (zeros encrypted off-sample) is invisible to the
    // empirical mechanism: transcripts match the hybrid byte for byte.
    const GameResult real =
        run_game(nat_params, make_ifpc_adversary(cfg.attack),
                 make_naturalizing_factory(cfg, empirical_factory(), WrapVariant::kReal),
                 nat_seeds);
    if (real.transcript.serialize() != hybrid.transcript.serialize())
      ++transcript_mismatches;
  }
  const bool ok = answer_mismatches == 0 && transcript_mismatches == 0;
  report(6, ok,
         std::to_string(runs) +
             " seeded paired runs: wrapped-vs-inner true-answer mismatches " +
             std::to_string(answer_mismatches) +
             " (need 0), real-vs-hybrid transcript mismatches " +
             std::to_string(transcript_mismatches) + " (need 0)");
  CHECK(answer_mismatches == 0);
  CHECK(transcript_mismatches == 0);
}

TEST_CASE("criterion 7: the two parties approximately agree; eavesdroppers do not") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kApproxAgreement;
  cfg.n = 200;
  cfg.c = 20;
  cfg.trials = 200;
  cfg.seed = 107;
  cfg.threads = pool_threads();
  const TrialSummary s = run_experiment(cfg);
  const double echo = metric(s, "echo_hit_rate");
  const double mean = metric(s, "mean_hit_rate");
  const bool ok =
      s.errors == 0 && s.rate >= 0.90 && echo <= 0.30 && mean <= 0.30;
  report(7, ok,
         "n=200, 200 runs: |o1-o2| within 2*n^(-1/10) in " + fmt3(s.rate) +
             " (need >= 0.90); transcript eavesdroppers within 1/20 of o1: echo " +
             fmt3(echo) + ", answer-mean " + fmt3(mean) + " (both need <= 0.30)");
  CHECK(s.errors == 0);
  CHECK(s.rate >= 0.90);
  CHECK(echo <= 0.30);
  CHECK(mean <= 0.30);
}

TEST_CASE("criterion 8: bucketing turns an alpha gap into agreement") {
  const Bucketing b = make_bucketing(0.01, 1.0);
  RngStream rng(108);
  const std::size_t reps = 100000;
  std::size_t gap_agree = 0;
  std::size_t exact_agree = 0;
  for (std::size_t i = 0; i < reps; ++i) {
    // Worst allowed disagreement |o1 - o2| = alpha, at a random spot.
    const double o1 = -1.0 + rng.uniform01() * (2.0 - 0.01);
    const WeakKaResult r = run_weak_ka(o1, o1 + 0.01, b, rng);
    gap_agree += r.bucket1 == r.bucket2;
  }
  RngStream rng2(1108);
  for (std::size_t i = 0; i < reps; ++i) {
    const double o1 = -1.0 + rng2.uniform01() * 2.0;
    exact_agree += run_weak_ka(o1, o1, b, rng2).agree;
  }
  const double gap_rate = static_cast<double>(gap_agree) / reps;
  const bool ok = gap_rate >= 0.89 && exact_agree == reps;
  report(8, ok,
         "alpha=0.01 beta=1: bucket agreement at a forced alpha gap " +
             fmt3(gap_rate) + " over 100000 draws (need >= 0.89); exact match "
             "agreed in " +
             std::to_string(exact_agree) + "/100000 (need all)");
  CHECK(gap_rate >= 0.89);
  CHECK(exact_agree == reps);
}

TEST_CASE("criterion 9: inner-product decoding from a noisy predictor") {
  ExperimentConfig noisy;
  noisy.kind = ExperimentKind::kGlDecode;
  noisy.n = 200;  // majority votes per bit
  noisy.mb = 8;
  noisy.oracle_error = 0.24;
  noisy.trials = 500;
  noisy.seed = 109;
  noisy.threads = pool_threads();
  const TrialSummary s = run_experiment(noisy);

  ExperimentConfig exact = noisy;
  exact.oracle_error = 0.0;
  exact.trials = 100;
  exact.seed = 1109;
  const TrialSummary e = run_experiment(exact);

  // <s, r xor e_i> = <s, r> xor s_i for every secret, mask and bit, and
  // the packaged exact oracle computes that same parity.
  std::size_t linearity_violations = 0;
  std::size_t oracle_mismatches = 0;
  for (std::size_t mb = 1; mb <= 10; ++mb) {
    const std::uint32_t span = 1u << mb;
    for (std::uint32_t sct = 0; sct < span; ++sct) {
      const GlOracle oracle = make_exact_oracle(sct);
      for (std::uint32_t r = 0; r < span; ++r) {
        const int base = std::popcount(sct & r) & 1;
        if (oracle(r) != base) ++oracle_mismatches;
        for (std::size_t i = 0; i < mb; ++i) {
          const int flipped = std::popcount(sct & (r ^ (1u << i))) & 1;
          if (flipped != (base ^ ((sct >> i) & 1))) ++linearity_violations;
        }
      }
    }
  }
  const bool ok = s.errors == 0 && s.rate >= 0.99 && e.rate == 1.0 &&
                  linearity_violations == 0 && oracle_mismatches == 0;
  report(9, ok,
         "error 0.24, 8-bit secrets, 200 votes: full recovery rate " +
             fmt3(s.rate) + " over 500 trials (need >= 0.99); exact oracle rate " +
             fmt3(e.rate) + " (need 1); linearity violations up to 10 bits: " +
             std::to_string(linearity_violations + oracle_mismatches) + " (need 0)");
  CHECK(s.errors == 0);
  CHECK(s.rate >= 0.99);
  CHECK(e.rate == 1.0);
  CHECK(linearity_violations == 0);
  CHECK(oracle_mismatches == 0);
}

TEST_CASE("criterion 10: reruns with one master seed are byte-identical") {
  std::vector<ExperimentConfig> cases;
  {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::kNaturalAttack;
    cfg.n = 10;
    cfg.c = 4;
    cfg.rounds = 200;
    cfg.trials = 5;
    cases.push_back(cfg);
    cfg.kind = ExperimentKind::kBalancedAttack;
    cfg.lambda = 16;
    cfg.rounds = 40;
    cases.push_back(cfg);
    cfg = ExperimentConfig{};
    cfg.kind = ExperimentKind::kDpBaseline;
    cfg.n = 20;
    cfg.c = 4;
    cfg.trials = 3;
    cases.push_back(cfg);
    cfg.kind = ExperimentKind::kApproxAgreement;
    cfg.n = 10;
    cfg.rounds = 120;
    cases.push_back(cfg);
    cfg.kind = ExperimentKind::kWeakKa;
    cases.push_back(cfg);
    cfg = ExperimentConfig{};
    cfg.kind = ExperimentKind::kGlDecode;
    cfg.n = 30;
    cfg.mb = 5;
    cfg.trials = 4;
    cases.push_back(cfg);
    cfg = ExperimentConfig{};
    cfg.kind = ExperimentKind::kIbeSelftest;
    cfg.n = 8;
    cfg.c = 2;
    cfg.lambda = 16;
    cfg.trials = 3;
    cases.push_back(cfg);
  }
  std::size_t mismatches = 0;
  for (ExperimentConfig cfg : cases) {
    cfg.seed = 110;
    const TrialSummary first = run_experiment(cfg);
    const TrialSummary again = run_experiment(cfg);
    cfg.threads = 4;
    const TrialSummary threaded = run_experiment(cfg);
    if (first.csv != again.csv || first.csv != threaded.csv) ++mismatches;
    CHECK(first.csv == again.csv);
    CHECK(first.csv == threaded.csv);
  }
  const bool ok = mismatches == 0;
  report(10, ok,
         "all seven experiment kinds rerun (incl. a threaded rerun): CSV "
         "mismatches " +
             std::to_string(mismatches) + " (need 0)");
  CHECK(mismatches == 0);
}
