// ada-arena: experiment harness for the adaptive-data-analysis arena.
//
//   ada-arena <kind> [flags]        one seeded trial batch + CSV
//   ada-arena sweep --n-grid ...    attack batches across sample sizes
//   ada-arena calibrate ...         accusation-threshold grid search
//
// Kinds: natural_attack, balanced_attack, dp_baseline, approx_agreement,
// weak_ka (alias ka), gl_decode (alias gl), ibe_selftest.  `attack
// natural` / `attack balanced` are nested aliases for the first two.
// Every run is a pure function of (config, --seed): rerunning with the
// same inputs reproduces the CSV byte for byte.  Exit codes: 0 ok,
// 2 configuration error, 3 --assert condition unmet.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arena/domain.hpp"
#include "arena/experiment.hpp"

namespace {

struct CliState {
  arena::ExperimentConfig cfg;
  std::string assert_expr;
  std::vector<std::size_t> n_grid;
  std::vector<double> multipliers;
  std::string sweep_kind = "natural_attack";
  enum class Mode { kRun, kSweep, kCalibrate } mode = Mode::kRun;
};

void add_common_options(CLI::App* cmd, CliState& st) {
  cmd->option_defaults()->always_capture_default();
  cmd->add_option("--n", st.cfg.n, "sample count (gl_decode: votes per bit)");
  cmd->add_option("--c", st.cfg.c, "universe blow-up, m = c*n");
  cmd->add_option("--rounds", st.cfg.rounds, "attack round budget (0 = default)");
  cmd->add_option("--tau", st.cfg.tau, "accusation threshold (0 = default)");
  cmd->add_option("--mechanism", st.cfg.mechanism,
                  "empirical|gaussian|oracle|natural:mean|natural:zero");
  cmd->add_option("--sigma", st.cfg.sigma, "gaussian noise scale (<0 = default)");
  cmd->add_flag("--allow-oracle", st.cfg.allow_oracle,
                "permit the referee-assisted oracle mechanism");
  cmd->add_option("--ibe", st.cfg.ibe, "IBE scheme: trivial|compact");
  cmd->add_option("--lambda", st.cfg.lambda, "per-identity key bits");
  cmd->add_option("--trials", st.cfg.trials, "trial count");
  cmd->add_option("--seed", st.cfg.seed, "master seed");
  cmd->add_option("--alpha", st.cfg.alpha, "weak-ka agreement radius");
  cmd->add_option("--beta", st.cfg.beta, "weak-ka eavesdropper radius");
  cmd->add_option("--radius", st.cfg.radius,
                  "approx-agreement radius (0 = 2*n^-0.1)");
  cmd->add_option("--eve-radius", st.cfg.eve_radius,
                  "eavesdropper hit radius");
  cmd->add_option("--mb", st.cfg.mb, "gl_decode index width in bits");
  cmd->add_option("--oracle-error", st.cfg.oracle_error,
                  "gl_decode oracle flip probability");
  cmd->add_option("--threads", st.cfg.threads, "worker pool size");
  cmd->add_option("--out", st.cfg.out,
                  "CSV path (default $ADA_ARENA_OUT/<kind>.csv)");
  cmd->add_option("--assert", st.assert_expr,
                  "exit 3 unless '<metric><op><value>' holds, e.g. rate>=0.75");
  cmd->set_config("--config", "", "flat key=value file mirroring these flags");
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw arena::ConfigError("cannot open output file '" + path + "'");
  os << content;
  if (!os) throw arena::ConfigError("failed writing output file '" + path + "'");
}

// Same resolution rule as the per-kind CSV writer, for sweep/calibrate.
std::string aux_out_path(const std::string& out, const char* stem) {
  if (!out.empty()) return out;
  const char* dir = std::getenv("ADA_ARENA_OUT");
  if (dir == nullptr || *dir == '\0') return "";
  return std::string(dir) + "/" + stem + ".csv";
}

int dispatch(const CliState& st) {
  auto start = std::chrono::steady_clock::now();
  int status = 0;
  switch (st.mode) {
    case CliState::Mode::kRun: {
      arena::TrialSummary summary = arena::run_experiment(st.cfg);
      std::cout << arena::summary_text(st.cfg, summary);
      std::string path = arena::write_csv(st.cfg, summary);
      if (!path.empty()) std::cout << "csv " << path << "\n";
      if (!st.assert_expr.empty() &&
          !arena::check_assertion(summary, st.assert_expr))
        status = 3;
      break;
    }
    case CliState::Mode::kSweep: {
      arena::ExperimentConfig base = st.cfg;
      auto kind = arena::parse_kind(st.sweep_kind);
      if (!kind) throw arena::ConfigError("sweep: unknown kind " + st.sweep_kind);
      base.kind = *kind;
      base.out.clear();
      arena::SweepResult result = arena::run_sweep(base, st.n_grid);
      std::cout << result.csv;
      std::string path = aux_out_path(st.cfg.out, "sweep");
      if (!path.empty()) {
        write_text(path, result.csv);
        std::cout << "csv " << path << "\n";
      }
      break;
    }
    case CliState::Mode::kCalibrate: {
      arena::ExperimentConfig base = st.cfg;
      base.out.clear();
      arena::CalibrationResult result =
          arena::run_calibration(base, st.multipliers);
      std::cout << result.csv;
      std::cout << "recommended_tau " << result.recommended_tau << "\n";
      std::string path = aux_out_path(st.cfg.out, "calibrate");
      if (!path.empty()) {
        write_text(path, result.csv);
        std::cout << "csv " << path << "\n";
      }
      break;
    }
  }
  std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  std::cout << "elapsed_seconds " << elapsed.count() << "\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation arena for adaptive data analysis games"};
  app.require_subcommand(1);
  CliState st;

  using arena::ExperimentKind;
  struct KindCmd {
    ExperimentKind kind;
    const char* desc;
    const char* alias;
  };
  const KindCmd kinds[] = {
      {ExperimentKind::kNaturalAttack,
       "fingerprinting attack over the index universe", nullptr},
      {ExperimentKind::kBalancedAttack,
       "the same attack through the keyed triplet game", nullptr},
      {ExperimentKind::kDpBaseline,
       "gaussian-noise vs empirical-mean contrast on paired seeds", nullptr},
      {ExperimentKind::kApproxAgreement,
       "two-party agreement reading of the game", nullptr},
      {ExperimentKind::kWeakKa, "agreement plus bucketing: one key bit", "ka"},
      {ExperimentKind::kGlDecode,
       "inner-product decoding from a noisy bit predictor", "gl"},
      {ExperimentKind::kIbeSelftest,
       "completeness and distinguishing checks of the IBE schemes", nullptr},
  };
  for (const KindCmd& k : kinds) {
    CLI::App* cmd = app.add_subcommand(arena::kind_name(k.kind), k.desc);
    if (k.alias != nullptr) cmd->alias(k.alias);
    add_common_options(cmd, st);
    cmd->callback([&st, kind = k.kind] {
      st.cfg.kind = kind;
      st.mode = CliState::Mode::kRun;
    });
  }

  CLI::App* attack = app.add_subcommand("attack", "attack experiments");
  attack->require_subcommand(1);
  CLI::App* attack_natural =
      attack->add_subcommand("natural", "same as natural_attack");
  CLI::App* attack_balanced =
      attack->add_subcommand("balanced", "same as balanced_attack");
  for (CLI::App* cmd : {attack_natural, attack_balanced}) {
    add_common_options(cmd, st);
    bool balanced = cmd == attack_balanced;
    cmd->callback([&st, balanced] {
      st.cfg.kind = balanced ? ExperimentKind::kBalancedAttack
                             : ExperimentKind::kNaturalAttack;
      st.mode = CliState::Mode::kRun;
    });
  }

  CLI::App* sweep =
      app.add_subcommand("sweep", "attack batches across sample sizes");
  add_common_options(sweep, st);
  sweep->add_option("--n-grid", st.n_grid, "sample sizes, e.g. 20,40,80")
      ->required()
      ->delimiter(',');
  sweep->add_option("--kind", st.sweep_kind, "natural_attack|balanced_attack");
  sweep->callback([&st] { st.mode = CliState::Mode::kSweep; });

  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "accusation-threshold grid search; recommends tau");
  add_common_options(calibrate, st);
  calibrate
      ->add_option("--multipliers", st.multipliers,
                   "grid of default-tau multipliers")
      ->delimiter(',');
  calibrate->callback([&st] {
    st.cfg.kind = ExperimentKind::kNaturalAttack;
    st.mode = CliState::Mode::kCalibrate;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return dispatch(st);
  } catch (const arena::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
