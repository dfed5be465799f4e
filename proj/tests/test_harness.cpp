#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "arena/experiment.hpp"
#include "arena/key_agreement.hpp"
#include "doctest.h"

using namespace arena;

namespace {

std::size_t line_count(const std::string& s) {
  std::size_t lines = 0;
  for (char ch : s)
    if (ch == '\n') ++lines;
  return lines;
}

ExperimentConfig quick_attack_config() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kNaturalAttack;
  cfg.n = 10;
  cfg.c = 4;
  cfg.rounds = 200;
  cfg.trials = 3;
  cfg.seed = 401;
  return cfg;
}

}  // namespace

TEST_CASE("tail bound and interval reference values") {
  // 2*exp(-1) and 2*exp(-25), frozen from an independent evaluation.
  CHECK(hoeffding_bound(200, 0.1) == doctest::Approx(0.7357588823428847).epsilon(1e-14));
  CHECK(hoeffding_bound(200, 0.5) ==
        doctest::Approx(2.7775887729928042e-11).epsilon(1e-12));
  CHECK_THROWS_AS(hoeffding_bound(10, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(hoeffding_bound(10, 2.5), std::invalid_argument);

  const Interval mid = wilson_interval(50, 100);
  CHECK(mid.lo == doctest::Approx(0.40383152963549296).epsilon(1e-13));
  CHECK(mid.hi == doctest::Approx(0.596168470364507).epsilon(1e-13));
  CHECK(wilson_interval(0, 10).lo == 0.0);
  CHECK(wilson_interval(10, 10).hi == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(wilson_interval(159, 200).lo > 0.70);
  CHECK_THROWS_AS(wilson_interval(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(5, 4), std::invalid_argument);

  CHECK(median_of({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median_of({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK_THROWS_AS(median_of({}), std::invalid_argument);
  CHECK_THROWS_AS(mean_of({}), std::invalid_argument);
  CHECK_THROWS_AS(sample_stddev({1.0}), std::invalid_argument);
}

TEST_CASE("experiment kinds round-trip through their names") {
  const ExperimentKind kinds[] = {
      ExperimentKind::kNaturalAttack,  ExperimentKind::kBalancedAttack,
      ExperimentKind::kDpBaseline,     ExperimentKind::kApproxAgreement,
      ExperimentKind::kWeakKa,         ExperimentKind::kGlDecode,
      ExperimentKind::kIbeSelftest,
  };
  for (ExperimentKind k : kinds) {
    const auto parsed = parse_kind(kind_name(k));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == k);
  }
  CHECK(parse_kind("natural_attack") == ExperimentKind::kNaturalAttack);
  CHECK(parse_kind("weak_ka") == ExperimentKind::kWeakKa);
  CHECK(!parse_kind("no_such_thing").has_value());
}

TEST_CASE("configurations are validated before any trial runs") {
  ExperimentConfig cfg = quick_attack_config();
  cfg.trials = 0;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg = quick_attack_config();
  cfg.n = 0;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg = quick_attack_config();
  cfg.n = std::size_t{1} << 31;
  cfg.c = 4;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg = quick_attack_config();
  cfg.mechanism = "oracle";  // without the opt-in guard
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg = quick_attack_config();
  cfg.mechanism = "no_such_mechanism";
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg = quick_attack_config();
  cfg.ibe = "rot13";
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg = quick_attack_config();
  cfg.kind = ExperimentKind::kGlDecode;
  cfg.mb = 0;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg.mb = 33;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg = quick_attack_config();
  cfg.kind = ExperimentKind::kGlDecode;
  cfg.oracle_error = 1.5;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg = quick_attack_config();
  cfg.kind = ExperimentKind::kWeakKa;
  cfg.alpha = 0.5;
  cfg.beta = 0.2;
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
}

TEST_CASE("the attack succeeds against the empirical mechanism, never the oracle") {
  ExperimentConfig cfg = quick_attack_config();
  const TrialSummary empirical = run_experiment(cfg);
  CHECK(empirical.trials == 3);
  CHECK(empirical.errors == 0);
  CHECK(empirical.rate == 1.0);
  CHECK(check_assertion(empirical, "mean_accused>0"));

  cfg.mechanism = "oracle";
  cfg.allow_oracle = true;
  const TrialSummary oracle = run_experiment(cfg);
  CHECK(oracle.successes == 0);
  CHECK(oracle.rate == 0.0);
  CHECK(oracle.errors == 0);
  CHECK(oracle.wilson.lo == 0.0);
}

TEST_CASE("per-trial failures become schema-preserving error rows") {
  // The compact headline parameters do not exist below lambda = 8; asking
  // the per-identity scheme for lambda = 7 makes every trial throw during
  // setup, which must surface as counted error rows, not a batch abort.
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kBalancedAttack;
  cfg.n = 4;
  cfg.c = 2;
  cfg.rounds = 30;
  cfg.trials = 2;
  cfg.ibe = "trivial";
  cfg.lambda = 7;
  cfg.seed = 402;
  const TrialSummary s = run_experiment(cfg);
  CHECK(s.errors == 2);
  CHECK(s.successes == 0);
  CHECK(s.rate == 0.0);
  REQUIRE(line_count(s.csv) == 3);  // header + one row per trial
  std::istringstream rows(s.csv);
  std::string line;
  std::getline(rows, line);
  CHECK(line ==
        "trial,seed,outcome,first_failure_round,max_error,accused,"
        "reconstruct_round,error");
  while (std::getline(rows, line)) {
    REQUIRE(line.size() >= 2);
    CHECK(line.substr(line.size() - 2) == ",1");
  }
}

TEST_CASE("reruns and thread counts do not change the CSV") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kGlDecode;
  cfg.n = 25;  // votes per bit
  cfg.mb = 4;
  cfg.oracle_error = 0.1;
  cfg.trials = 6;
  cfg.seed = 403;
  const TrialSummary once = run_experiment(cfg);
  const TrialSummary twice = run_experiment(cfg);
  CHECK(once.csv == twice.csv);
  cfg.threads = 4;
  const TrialSummary threaded = run_experiment(cfg);
  CHECK(once.csv == threaded.csv);
  CHECK(once.successes == threaded.successes);
}

TEST_CASE("noise-free inner-product decoding always recovers the target") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kGlDecode;
  cfg.n = 20;
  cfg.mb = 6;
  cfg.oracle_error = 0.0;
  cfg.trials = 5;
  cfg.seed = 404;
  const TrialSummary s = run_experiment(cfg);
  CHECK(s.successes == 5);
  CHECK(s.rate == 1.0);
  CHECK(check_assertion(s, "mean_bit_errors==0"));
}

TEST_CASE("the scheme selftest passes for both instantiations") {
  for (const char* scheme : {"trivial", "compact"}) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::kIbeSelftest;
    cfg.n = 8;
    cfg.c = 2;  // 16 identities
    cfg.lambda = 16;
    cfg.ibe = scheme;
    cfg.trials = 4;
    cfg.seed = 405;
    const TrialSummary s = run_experiment(cfg);
    CHECK(s.successes == 4);
    CHECK(s.errors == 0);
    CHECK(check_assertion(s, "complete_rate==1"));
    CHECK(s.csv.find(scheme) != std::string::npos);
  }
}

TEST_CASE("assertion expressions parse metrics and comparison operators") {
  TrialSummary s;
  s.rate = 0.8;
  s.metrics = {{"foo", 2.0}};
  CHECK(check_assertion(s, "rate>=0.75"));
  CHECK(!check_assertion(s, "rate>=0.9"));
  CHECK(check_assertion(s, "rate<=0.8"));
  CHECK(check_assertion(s, "foo==2"));
  CHECK(check_assertion(s, "foo>1.5"));
  CHECK(!check_assertion(s, "foo<2"));
  CHECK(check_assertion(s, "foo <= 2.5"));
  CHECK_THROWS_AS(check_assertion(s, "bar>=0"), ConfigError);
  CHECK_THROWS_AS(check_assertion(s, "rate"), ConfigError);
  CHECK_THROWS_AS(check_assertion(s, "rate>=banana"), ConfigError);
}

TEST_CASE("the summary block is deterministic and self-describing") {
  ExperimentConfig cfg = quick_attack_config();
  const TrialSummary s = run_experiment(cfg);
  const std::string a = summary_text(cfg, s);
  const std::string b = summary_text(cfg, s);
  CHECK(a == b);
  CHECK(a.find("kind natural_attack") != std::string::npos);
  CHECK(a.find("trials 3") != std::string::npos);
  CHECK(a.find("rate") != std::string::npos);
}

TEST_CASE("sweeps walk the sample-size grid with per-point defaults") {
  ExperimentConfig base = quick_attack_config();
  base.rounds = 0;  // per-n default budgets
  base.trials = 3;
  const SweepResult sweep = run_sweep(base, {8, 12});
  REQUIRE(sweep.points.size() == 2);
  CHECK(sweep.points[0].n == 8);
  CHECK(sweep.points[1].n == 12);
  CHECK(sweep.points[0].rounds_budget == default_attack_rounds(8, 32));
  CHECK(sweep.points[1].rounds_budget == default_attack_rounds(12, 48));
  for (const SweepPoint& p : sweep.points) {
    CHECK(p.summary.trials == 3);
    CHECK(p.summary.rate == 1.0);
    CHECK(p.median_reconstruct > 0.0);
  }
  CHECK(line_count(sweep.csv) == 3);

  ExperimentConfig wrong = base;
  wrong.kind = ExperimentKind::kGlDecode;
  CHECK_THROWS_AS(run_sweep(wrong, {8}), ConfigError);
  CHECK_THROWS_AS(run_sweep(base, {}), ConfigError);
}

TEST_CASE("calibration scans threshold multipliers and prefers larger ties") {
  ExperimentConfig base = quick_attack_config();
  base.trials = 2;
  const CalibrationResult cal = run_calibration(base, {0.75, 1.0});
  REQUIRE(cal.points.size() == 2);
  CHECK(cal.points[0].multiplier == 0.75);
  CHECK(cal.points[1].multiplier == 1.0);
  CHECK(cal.points[0].tau < cal.points[1].tau);
  // Both multipliers reconstruct at this size; the tie goes to the more
  // conservative threshold.
  CHECK(cal.points[0].rate == 1.0);
  CHECK(cal.points[1].rate == 1.0);
  CHECK(cal.recommended_tau == cal.points[1].tau);
  CHECK(line_count(cal.csv) == 3);

  ExperimentConfig wrong = base;
  wrong.kind = ExperimentKind::kWeakKa;
  CHECK_THROWS_AS(run_calibration(wrong, {1.0}), ConfigError);
}

TEST_CASE("CSV files land where the configuration points") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kGlDecode;
  cfg.n = 10;
  cfg.mb = 3;
  cfg.trials = 2;
  cfg.seed = 406;
  const TrialSummary s = run_experiment(cfg);

  cfg.out = "/tmp/arena_harness_test.csv";
  std::remove(cfg.out.c_str());
  CHECK(write_csv(cfg, s) == cfg.out);
  std::ifstream in(cfg.out);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == s.csv);
  std::remove(cfg.out.c_str());

  cfg.out.clear();
  unsetenv("ADA_ARENA_OUT");
  CHECK(write_csv(cfg, s).empty());
}

TEST_CASE("the weak key-agreement experiment reports its grid") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kWeakKa;
  cfg.n = 10;
  cfg.c = 4;
  cfg.trials = 3;
  cfg.alpha = 0.02;
  cfg.beta = 1.0;
  cfg.seed = 407;
  const TrialSummary s = run_experiment(cfg);
  CHECK(s.trials == 3);
  CHECK(s.errors == 0);
  REQUIRE(line_count(s.csv) == 4);
  CHECK(s.csv.rfind("trial,o1,o2,agree_bit,best_G_error,error", 0) == 0);
  const Bucketing b = make_bucketing(0.02, 1.0);
  CHECK(check_assertion(s, "mb==" + std::to_string(b.mb)));
  bool found_gamma = false;
  for (const auto& [name, value] : s.metrics)
    if (name == "gamma") {
      found_gamma = true;
      CHECK(value == b.gamma_tilde);
    }
  CHECK(found_gamma);
}

TEST_CASE("the baseline contrast reports both mechanisms' failure rates") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::kDpBaseline;
  cfg.n = 50;
  cfg.c = 4;
  cfg.trials = 3;
  cfg.seed = 408;
  const TrialSummary s = run_experiment(cfg);
  CHECK(s.trials == 3);
  CHECK(s.errors == 0);
  REQUIRE(line_count(s.csv) == 4);
  CHECK(s.csv.rfind("trial,seed,gaussian_outcome", 0) == 0);
  bool has_gauss = false, has_emp = false;
  for (const auto& [name, value] : s.metrics) {
    if (name == "gaussian_fail_rate") {
      has_gauss = true;
      CHECK(value == s.rate);
    }
    if (name == "empirical_fail_rate") {
      has_emp = true;
      CHECK(value >= 0.0);
      CHECK(value <= 1.0);
    }
  }
  CHECK(has_gauss);
  CHECK(has_emp);
}
