#include "arena/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "arena/balanced.hpp"
#include "arena/ifpc.hpp"
#include "arena/key_agreement.hpp"
#include "arena/mechanisms.hpp"

namespace arena {
namespace {

constexpr struct {
  ExperimentKind kind;
  const char* name;
} kKindNames[] = {
    {ExperimentKind::kNaturalAttack, "natural_attack"},
    {ExperimentKind::kBalancedAttack, "balanced_attack"},
    {ExperimentKind::kDpBaseline, "dp_baseline"},
    {ExperimentKind::kApproxAgreement, "approx_agreement"},
    {ExperimentKind::kWeakKa, "weak_ka"},
    {ExperimentKind::kGlDecode, "gl_decode"},
    {ExperimentKind::kIbeSelftest, "ibe_selftest"},
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

IbeSchemeKind parse_scheme(const std::string& name) {
  if (name == "compact") return IbeSchemeKind::kCompact;
  if (name == "trivial") return IbeSchemeKind::kTrivialPke;
  throw ConfigError("unknown ibe scheme '" + name + "' (trivial|compact)");
}

std::uint32_t random_bits(RngStream& rng, std::size_t mb) {
  std::uint32_t mask = mb >= 32 ? 0xffffffffu
                                : static_cast<std::uint32_t>((1u << mb) - 1u);
  return static_cast<std::uint32_t>(rng.next_u64()) & mask;
}

// Everything derived from the raw config once, shared by all trials.
struct Resolved {
  std::uint32_t m = 0;
  std::size_t rounds = 0;
  double tau = 0.0;
  double radius = 0.0;
  AttackConfig attack;
  IbeSchemeKind scheme = IbeSchemeKind::kCompact;
  MechanismFactory factory;
  std::optional<Bucketing> bucketing;
  std::string header;
};

const char* csv_header(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kNaturalAttack:
    case ExperimentKind::kBalancedAttack:
      return "trial,seed,outcome,first_failure_round,max_error,accused,"
             "reconstruct_round,error";
    case ExperimentKind::kDpBaseline:
      return "trial,seed,gaussian_outcome,gaussian_first_failure,"
             "gaussian_max_error,gaussian_clipped_rounds,empirical_outcome,"
             "empirical_first_failure,empirical_max_error,error";
    case ExperimentKind::kApproxAgreement:
      return "trial,seed,o1,o2,diff,within,true_final,echo_value,echo_hit,"
             "mean_value,mean_hit,oracle_hit,error";
    case ExperimentKind::kWeakKa:
      return "trial,o1,o2,agree_bit,best_G_error,error";
    case ExperimentKind::kGlDecode:
      return "trial,seed,target,recovered,exact,bit_errors,error";
    case ExperimentKind::kIbeSelftest:
      return "trial,seed,scheme,complete,wrong_key_rejects,random_win,"
             "replay_win,abuse_win,aborted,error";
  }
  throw ConfigError("unknown experiment kind");
}

Resolved resolve(const ExperimentConfig& cfg) {
  if (cfg.n == 0 || cfg.c == 0 || cfg.trials == 0)
    throw ConfigError("config: n, c, trials must be positive");
  Resolved r;
  if (cfg.n > 0xffffffffull / cfg.c)
    throw ConfigError("config: c*n overflows the identity universe");
  r.m = static_cast<std::uint32_t>(cfg.c * cfg.n);
  if (r.m < 2) throw ConfigError("config: need at least two identities (c*n >= 2)");
  r.rounds = cfg.rounds;
  if (r.rounds == 0)
    r.rounds = cfg.kind == ExperimentKind::kDpBaseline
                   ? cfg.n
                   : default_attack_rounds(cfg.n, r.m);
  r.tau = cfg.tau > 0.0 ? cfg.tau : default_attack_tau(cfg.n, r.m, r.rounds);
  r.attack = AttackConfig{cfg.c, r.rounds, r.tau, 0};
  r.radius = cfg.radius > 0.0
                 ? cfg.radius
                 : 2.0 * std::pow(static_cast<double>(cfg.n), -0.1);
  r.scheme = parse_scheme(cfg.ibe);
  r.factory = make_mechanism_factory(cfg.mechanism, cfg.sigma, cfg.allow_oracle);
  if (cfg.kind == ExperimentKind::kWeakKa)
    r.bucketing = make_bucketing(cfg.alpha, cfg.beta);
  if (cfg.kind == ExperimentKind::kGlDecode && (cfg.mb == 0 || cfg.mb > 32))
    throw ConfigError("config: mb must be in [1,32]");
  if (!(cfg.oracle_error >= 0.0 && cfg.oracle_error <= 1.0))
    throw ConfigError("config: oracle-error outside [0,1]");
  r.header = csv_header(cfg.kind);
  return r;
}

struct TrialOut {
  bool success = false;
  bool error = false;
  double aux_a = 0.0;
  double aux_b = 0.0;
  std::vector<double> extra;
  std::string row;
};

// Zero-filled row for a trial that threw; keeps the schema intact so the
// batch can continue.
TrialOut error_row(const ExperimentConfig& cfg, const Resolved& r, std::size_t i) {
  TrialOut out;
  out.error = true;
  std::size_t cols = 1 + static_cast<std::size_t>(
                             std::count(r.header.begin(), r.header.end(), ','));
  std::string row = std::to_string(i);
  std::size_t used = 1;
  if (cfg.kind != ExperimentKind::kWeakKa) {
    row += "," + std::to_string(derive_seed(cfg.seed, "trial", i));
    used = 2;
  }
  for (std::size_t k = used; k + 1 < cols; ++k) row += ",0";
  row += ",1";
  out.row = row;
  return out;
}

struct AttackRun {
  GameResult game;
  std::size_t accused = 0;
  std::size_t reconstruct = 0;
};

AttackRun run_attack(const ExperimentConfig& cfg, const Resolved& r, bool balanced,
                     const MechanismFactory& factory, GameSeeds seeds) {
  AttackRun out;
  if (balanced) {
    BalancedConfig bcfg{r.scheme, cfg.lambda, r.attack};
    PublicParams params = balanced_params(cfg.n, bcfg, r.rounds);
    BalancedAnalyst analyst(params, r.scheme, cfg.lambda, r.attack, seeds.analyst);
    BalancedSampler sampler(r.scheme, r.m, cfg.lambda, seeds.sampler);
    auto [d, samples] = sampler.run(cfg.n);
    auto mechanism = factory(params, seeds.mechanism);
    out.game = run_game_with(params, d, samples, analyst, *mechanism);
    out.accused = analyst.inner().state().accused_count;
    out.reconstruct = reconstruction_round(analyst.inner().state(), samples);
  } else {
    PublicParams params{cfg.n, r.rounds, DomainSpec::index(r.m)};
    IfpcAnalyst analyst(cfg.n, r.rounds, r.m, r.attack, seeds.analyst);
    UniformIndexSampler sampler(r.m, seeds.sampler);
    auto [d, samples] = sampler.run(cfg.n);
    auto mechanism = factory(params, seeds.mechanism);
    out.game = run_game_with(params, d, samples, analyst, *mechanism);
    out.accused = analyst.state().accused_count;
    out.reconstruct = reconstruction_round(analyst.state(), samples);
  }
  return out;
}

TrialOut attack_trial(const ExperimentConfig& cfg, const Resolved& r, std::size_t i) {
  std::uint64_t trial_seed = derive_seed(cfg.seed, "trial", i);
  AttackRun run = run_attack(cfg, r, cfg.kind == ExperimentKind::kBalancedAttack,
                             r.factory, GameSeeds::from_master(trial_seed));
  TrialOut out;
  out.success = run.game.outcome == 1;
  out.aux_a = static_cast<double>(run.reconstruct);
  out.aux_b = static_cast<double>(run.game.first_failure_round.value_or(0));
  out.extra = {static_cast<double>(run.accused)};
  out.row = std::to_string(i) + "," + std::to_string(trial_seed) + "," +
            std::to_string(run.game.outcome) + "," +
            std::to_string(run.game.first_failure_round.value_or(0)) + "," +
            fmt(run.game.max_error) + "," + std::to_string(run.accused) + "," +
            std::to_string(run.reconstruct) + ",0";
  return out;
}

TrialOut dp_trial(const ExperimentConfig& cfg, const Resolved& r, std::size_t i) {
  std::uint64_t trial_seed = derive_seed(cfg.seed, "trial", i);
  GameSeeds seeds = GameSeeds::from_master(trial_seed);
  MechanismFactory gaussian =
      make_mechanism_factory("gaussian", cfg.sigma, false);
  MechanismFactory empirical = make_mechanism_factory("empirical", -1.0, false);
  AttackRun g = run_attack(cfg, r, false, gaussian, seeds);
  AttackRun e = run_attack(cfg, r, false, empirical, seeds);
  TrialOut out;
  out.success = g.game.outcome == 1;
  out.aux_a = g.game.max_error;
  out.aux_b = e.game.max_error;
  out.extra = {static_cast<double>(e.game.outcome)};
  out.row = std::to_string(i) + "," + std::to_string(trial_seed) + "," +
            std::to_string(g.game.outcome) + "," +
            std::to_string(g.game.first_failure_round.value_or(0)) + "," +
            fmt(g.game.max_error) + "," + std::to_string(g.game.clipped_rounds) +
            "," + std::to_string(e.game.outcome) + "," +
            std::to_string(e.game.first_failure_round.value_or(0)) + "," +
            fmt(e.game.max_error) + ",0";
  return out;
}

AgreementResult run_agreement(const ExperimentConfig& cfg, const Resolved& r,
                              std::uint64_t trial_seed) {
  PublicParams params{cfg.n, r.rounds, DomainSpec::index(r.m)};
  AdversaryPair pair = make_ifpc_adversary(r.attack);
  return run_approx_agreement(params, pair, r.factory,
                              GameSeeds::from_master(trial_seed));
}

TrialOut agreement_trial(const ExperimentConfig& cfg, const Resolved& r,
                         std::size_t i) {
  std::uint64_t trial_seed = derive_seed(cfg.seed, "trial", i);
  AgreementResult res = run_agreement(cfg, r, trial_seed);
  double diff = std::fabs(res.o1 - res.o2);
  double echo = make_echo_eavesdropper()(res.game.transcript);
  double mean = make_answer_mean_eavesdropper()(res.game.transcript);
  bool within = diff <= r.radius;
  bool echo_hit = std::fabs(echo - res.o1) <= cfg.eve_radius;
  bool mean_hit = std::fabs(mean - res.o1) <= cfg.eve_radius;
  bool oracle_hit = std::fabs(res.true_final - res.o1) <= cfg.eve_radius;
  TrialOut out;
  out.success = within;
  out.aux_a = diff;
  out.aux_b = std::min(std::fabs(echo - res.o1), std::fabs(mean - res.o1));
  out.extra = {echo_hit ? 1.0 : 0.0, mean_hit ? 1.0 : 0.0, oracle_hit ? 1.0 : 0.0};
  out.row = std::to_string(i) + "," + std::to_string(trial_seed) + "," +
            fmt(res.o1) + "," + fmt(res.o2) + "," + fmt(diff) + "," +
            (within ? "1" : "0") + "," + fmt(res.true_final) + "," + fmt(echo) +
            "," + (echo_hit ? "1" : "0") + "," + fmt(mean) + "," +
            (mean_hit ? "1" : "0") + "," + (oracle_hit ? "1" : "0") + ",0";
  return out;
}

TrialOut weak_ka_trial(const ExperimentConfig& cfg, const Resolved& r,
                       std::size_t i) {
  std::uint64_t trial_seed = derive_seed(cfg.seed, "trial", i);
  AgreementResult res = run_agreement(cfg, r, trial_seed);
  RngStream ka_rng(derive_seed(trial_seed, "weak-ka"));
  WeakKaResult w = run_weak_ka(res.o1, res.o2, *r.bucketing, ka_rng);
  double echo = make_echo_eavesdropper()(res.game.transcript);
  double mean = make_answer_mean_eavesdropper()(res.game.transcript);
  double best_g = std::min(std::fabs(echo - res.o1), std::fabs(mean - res.o1));
  TrialOut out;
  out.success = w.agree;
  out.aux_a = std::fabs(res.o1 - res.o2);
  out.aux_b = best_g;
  out.extra = {w.bucket1 == w.bucket2 ? 1.0 : 0.0, best_g};
  out.row = std::to_string(i) + "," + fmt(res.o1) + "," + fmt(res.o2) + "," +
            (w.agree ? "1" : "0") + "," + fmt(best_g) + ",0";
  return out;
}

TrialOut gl_trial(const ExperimentConfig& cfg, const Resolved&, std::size_t i) {
  std::uint64_t trial_seed = derive_seed(cfg.seed, "trial", i);
  RngStream target_rng(derive_seed(trial_seed, "gl/target"));
  std::uint32_t target = random_bits(target_rng, cfg.mb);
  GlOracle oracle = make_noisy_oracle(target, cfg.oracle_error,
                                      derive_seed(trial_seed, "gl/oracle"));
  RngStream mask_rng(derive_seed(trial_seed, "gl/masks"));
  std::uint32_t recovered = gl_decode(oracle, cfg.mb, cfg.n, mask_rng);
  int bit_errors = std::popcount(recovered ^ target);
  TrialOut out;
  out.success = recovered == target;
  out.aux_a = bit_errors;
  out.row = std::to_string(i) + "," + std::to_string(trial_seed) + "," +
            std::to_string(target) + "," + std::to_string(recovered) + "," +
            (out.success ? "1" : "0") + "," + std::to_string(bit_errors) + ",0";
  return out;
}

TrialOut ibe_trial(const ExperimentConfig& cfg, const Resolved& r, std::size_t i) {
  std::uint64_t trial_seed = derive_seed(cfg.seed, "trial", i);
  auto scheme = make_scheme(r.scheme, r.m, cfg.lambda);
  RngStream setup_rng(derive_seed(trial_seed, "ibe/setup"));
  IbeKeyMaterial keys = scheme->setup(setup_rng);
  RngStream enc_rng(derive_seed(trial_seed, "ibe/enc"));
  bool complete = true;
  bool wrong_rejects = true;
  for (std::uint32_t id = 1; id <= r.m; ++id) {
    BitString sk = scheme->keygen(keys.msk, id);
    int value = static_cast<int>(id % 3) - 1;
    Ciphertext ct = scheme->encrypt_value(keys.mpk, id, value, enc_rng);
    DecryptedValue dv = scheme->decrypt_value(sk, ct);
    complete = complete && dv.ok && dv.value == value;
    std::vector<std::uint8_t> bytes = {static_cast<std::uint8_t>(id & 0xff),
                                       static_cast<std::uint8_t>(id >> 8), 0x5a};
    Ciphertext ct2 = scheme->encrypt(keys.mpk, id, bytes, enc_rng);
    auto open = scheme->decrypt(sk, ct2);
    complete = complete && open.has_value() && *open == bytes;
    if (id <= 8) {
      BitString other = scheme->keygen(keys.msk, id % r.m + 1);
      wrong_rejects = wrong_rejects && !scheme->decrypt(other, ct2).has_value();
    }
  }
  RngStream ind_rng(derive_seed(trial_seed, "ibe/ind"));
  auto random_adv = make_random_guess_adversary();
  auto replay_adv = make_replay_distinguisher();
  auto abuse_adv = make_key_abusing_adversary();
  IndOutcome random_out = ind_ibe_experiment(*scheme, *random_adv, ind_rng);
  IndOutcome replay_out = ind_ibe_experiment(*scheme, *replay_adv, ind_rng);
  IndOutcome abuse_out = ind_ibe_experiment(*scheme, *abuse_adv, ind_rng);
  bool aborted = random_out.aborted || replay_out.aborted || abuse_out.aborted;
  TrialOut out;
  out.success = complete && wrong_rejects && abuse_out.win == 1 && !aborted;
  out.aux_a = complete ? 1.0 : 0.0;
  out.extra = {static_cast<double>(random_out.win),
               static_cast<double>(replay_out.win)};
  out.row = std::to_string(i) + "," + std::to_string(trial_seed) + "," +
            scheme_name(r.scheme) + "," + (complete ? "1" : "0") + "," +
            (wrong_rejects ? "1" : "0") + "," + std::to_string(random_out.win) +
            "," + std::to_string(replay_out.win) + "," +
            std::to_string(abuse_out.win) + "," + (aborted ? "1" : "0") + ",0";
  return out;
}

TrialOut run_trial(const ExperimentConfig& cfg, const Resolved& r, std::size_t i) {
  switch (cfg.kind) {
    case ExperimentKind::kNaturalAttack:
    case ExperimentKind::kBalancedAttack:
      return attack_trial(cfg, r, i);
    case ExperimentKind::kDpBaseline:
      return dp_trial(cfg, r, i);
    case ExperimentKind::kApproxAgreement:
      return agreement_trial(cfg, r, i);
    case ExperimentKind::kWeakKa:
      return weak_ka_trial(cfg, r, i);
    case ExperimentKind::kGlDecode:
      return gl_trial(cfg, r, i);
    case ExperimentKind::kIbeSelftest:
      return ibe_trial(cfg, r, i);
  }
  throw ConfigError("unknown experiment kind");
}

double mean_extra(const std::vector<TrialOut>& outs, std::size_t slot) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const TrialOut& t : outs) {
    if (t.error || slot >= t.extra.size()) continue;
    sum += t.extra[slot];
    count += 1;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

// Median of the positive entries (attacks: rounds are 0 when the event
// never happened).
double median_positive(const std::vector<double>& xs) {
  std::vector<double> pos;
  for (double x : xs)
    if (x > 0.0) pos.push_back(x);
  return pos.empty() ? 0.0 : median_of(std::move(pos));
}

}  // namespace

const char* kind_name(ExperimentKind kind) {
  for (const auto& k : kKindNames)
    if (k.kind == kind) return k.name;
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (const auto& k : kKindNames)
    if (name == k.name) return k.kind;
  return std::nullopt;
}

TrialSummary run_experiment(const ExperimentConfig& cfg) {
  Resolved r = resolve(cfg);
  std::vector<TrialOut> outs(cfg.trials);
  auto guarded = [&](std::size_t i) {
    try {
      return run_trial(cfg, r, i);
    } catch (const std::exception&) {
      return error_row(cfg, r, i);
    }
  };
  std::size_t workers = cfg.threads == 0 ? 1 : cfg.threads;
  workers = std::min(workers, cfg.trials);
  if (workers <= 1) {
    for (std::size_t i = 0; i < cfg.trials; ++i) outs[i] = guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cfg.trials;
             i = next.fetch_add(1))
          outs[i] = guarded(i);
      });
    for (std::thread& t : pool) t.join();
  }

  TrialSummary s;
  s.kind = cfg.kind;
  s.trials = cfg.trials;
  s.aux_a.reserve(cfg.trials);
  s.aux_b.reserve(cfg.trials);
  std::string csv = r.header + "\n";
  for (const TrialOut& t : outs) {
    if (t.success) s.successes += 1;
    if (t.error) s.errors += 1;
    s.aux_a.push_back(t.aux_a);
    s.aux_b.push_back(t.aux_b);
    csv += t.row;
    csv += '\n';
  }
  s.csv = std::move(csv);
  s.rate = static_cast<double>(s.successes) / static_cast<double>(s.trials);
  s.wilson = wilson_interval(s.successes, s.trials);

  switch (cfg.kind) {
    case ExperimentKind::kNaturalAttack:
    case ExperimentKind::kBalancedAttack: {
      std::size_t reconstructed = 0;
      for (double x : s.aux_a)
        if (x > 0.0) reconstructed += 1;
      s.metrics = {
          {"reconstructed_rate",
           static_cast<double>(reconstructed) / static_cast<double>(s.trials)},
          {"median_reconstruct_round", median_positive(s.aux_a)},
          {"median_first_failure_round", median_positive(s.aux_b)},
          {"mean_accused", mean_extra(outs, 0)},
      };
      break;
    }
    case ExperimentKind::kDpBaseline:
      s.metrics = {
          {"gaussian_fail_rate", s.rate},
          {"empirical_fail_rate", mean_extra(outs, 0)},
      };
      break;
    case ExperimentKind::kApproxAgreement: {
      double echo_rate = mean_extra(outs, 0);
      double mean_rate = mean_extra(outs, 1);
      s.metrics = {
          {"echo_hit_rate", echo_rate},
          {"mean_hit_rate", mean_rate},
          {"oracle_hit_rate", mean_extra(outs, 2)},
          {"gap", s.rate - std::max(echo_rate, mean_rate)},
      };
      break;
    }
    case ExperimentKind::kWeakKa:
      s.metrics = {
          {"bucket_agree_rate", mean_extra(outs, 0)},
          {"mean_best_G_error", mean_extra(outs, 1)},
          {"agreement_target", 1.0 - std::sqrt(cfg.alpha / cfg.beta)},
          {"gamma", r.bucketing->gamma_tilde},
          {"mb", static_cast<double>(r.bucketing->mb)},
      };
      break;
    case ExperimentKind::kGlDecode:
      s.metrics = {{"mean_bit_errors", mean_of(s.aux_a)}};
      break;
    case ExperimentKind::kIbeSelftest:
      s.metrics = {
          {"complete_rate", mean_of(s.aux_a)},
          {"random_win_rate", mean_extra(outs, 0)},
          {"replay_win_rate", mean_extra(outs, 1)},
      };
      break;
  }
  return s;
}

std::string write_csv(const ExperimentConfig& cfg, const TrialSummary& summary) {
  std::string path = cfg.out;
  if (path.empty()) {
    const char* dir = std::getenv("ADA_ARENA_OUT");
    if (dir == nullptr || *dir == '\0') return "";
    path = std::string(dir) + "/" + kind_name(cfg.kind) + ".csv";
  }
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw ConfigError("cannot open output file '" + path + "'");
  os << summary.csv;
  if (!os) throw ConfigError("failed writing output file '" + path + "'");
  return path;
}

std::string summary_text(const ExperimentConfig& cfg, const TrialSummary& s) {
  Resolved r = resolve(cfg);
  std::ostringstream os;
  os << "kind " << kind_name(cfg.kind) << "\n";
  os << "n " << cfg.n << "  c " << cfg.c << "  m " << r.m << "  seed " << cfg.seed
     << "\n";
  switch (cfg.kind) {
    case ExperimentKind::kNaturalAttack:
    case ExperimentKind::kBalancedAttack:
    case ExperimentKind::kDpBaseline:
      os << "rounds " << r.rounds << "  tau " << fmt(r.tau) << "  mechanism "
         << cfg.mechanism << "\n";
      if (cfg.kind == ExperimentKind::kBalancedAttack)
        os << "ibe " << cfg.ibe << "  lambda " << cfg.lambda << "  key_bits "
           << scheme_key_bits(r.scheme, r.m, cfg.lambda) << "\n";
      break;
    case ExperimentKind::kApproxAgreement:
      os << "rounds " << r.rounds << "  mechanism " << cfg.mechanism
         << "  radius " << fmt(r.radius) << "  eve_radius " << fmt(cfg.eve_radius)
         << "\n";
      break;
    case ExperimentKind::kWeakKa:
      os << "rounds " << r.rounds << "  alpha " << fmt(cfg.alpha) << "  beta "
         << fmt(cfg.beta) << "  gamma " << fmt(r.bucketing->gamma_tilde)
         << "  mb " << r.bucketing->mb << "\n";
      break;
    case ExperimentKind::kGlDecode:
      os << "mb " << cfg.mb << "  votes " << cfg.n << "  oracle_error "
         << fmt(cfg.oracle_error) << "\n";
      break;
    case ExperimentKind::kIbeSelftest:
      os << "ibe " << cfg.ibe << "  lambda " << cfg.lambda << "\n";
      break;
  }
  os << "trials " << s.trials << "  successes " << s.successes << "  errors "
     << s.errors << "\n";
  os << "rate " << fmt(s.rate) << "  wilson95 [" << fmt(s.wilson.lo) << ", "
     << fmt(s.wilson.hi) << "]\n";
  for (const auto& [name, value] : s.metrics)
    os << name << " " << fmt(value) << "\n";
  return os.str();
}

bool check_assertion(const TrialSummary& summary, const std::string& expr) {
  static const char* ops[] = {">=", "<=", "==", ">", "<"};
  for (const char* op : ops) {
    std::size_t at = expr.find(op);
    if (at == std::string::npos) continue;
    std::string name = expr.substr(0, at);
    while (!name.empty() && name.back() == ' ') name.pop_back();
    std::string rhs = expr.substr(at + std::strlen(op));
    char* end = nullptr;
    double want = std::strtod(rhs.c_str(), &end);
    if (end == rhs.c_str())
      throw ConfigError("assert: cannot parse value in '" + expr + "'");
    double have;
    if (name == "rate") {
      have = summary.rate;
    } else {
      const auto it = std::find_if(summary.metrics.begin(), summary.metrics.end(),
                                   [&](const auto& m) { return m.first == name; });
      if (it == summary.metrics.end())
        throw ConfigError("assert: unknown metric '" + name + "'");
      have = it->second;
    }
    if (std::strcmp(op, ">=") == 0) return have >= want;
    if (std::strcmp(op, "<=") == 0) return have <= want;
    if (std::strcmp(op, "==") == 0) return have == want;
    if (std::strcmp(op, ">") == 0) return have > want;
    return have < want;
  }
  throw ConfigError("assert: no comparison operator in '" + expr + "'");
}

SweepResult run_sweep(const ExperimentConfig& base,
                      const std::vector<std::size_t>& ns) {
  if (ns.empty()) throw ConfigError("sweep: empty grid");
  if (base.kind != ExperimentKind::kNaturalAttack &&
      base.kind != ExperimentKind::kBalancedAttack)
    throw ConfigError("sweep: only attack kinds are sweepable");
  SweepResult result;
  std::string csv =
      "n,rounds_budget,tau,trials,successes,rate,wilson_lo,wilson_hi,errors,"
      "median_reconstruct_round,median_first_failure_round\n";
  for (std::size_t n : ns) {
    ExperimentConfig cfg = base;
    cfg.n = n;
    Resolved r = resolve(cfg);
    SweepPoint p;
    p.n = n;
    p.rounds_budget = r.rounds;
    p.tau = r.tau;
    p.summary = run_experiment(cfg);
    p.median_reconstruct = median_positive(p.summary.aux_a);
    p.median_first_failure = median_positive(p.summary.aux_b);
    csv += std::to_string(n) + "," + std::to_string(p.rounds_budget) + "," +
           fmt(p.tau) + "," + std::to_string(p.summary.trials) + "," +
           std::to_string(p.summary.successes) + "," + fmt(p.summary.rate) + "," +
           fmt(p.summary.wilson.lo) + "," + fmt(p.summary.wilson.hi) + "," +
           std::to_string(p.summary.errors) + "," + fmt(p.median_reconstruct) +
           "," + fmt(p.median_first_failure) + "\n";
    result.points.push_back(std::move(p));
  }
  result.csv = std::move(csv);
  return result;
}

CalibrationResult run_calibration(const ExperimentConfig& base,
                                  std::vector<double> multipliers) {
  if (base.kind != ExperimentKind::kNaturalAttack &&
      base.kind != ExperimentKind::kBalancedAttack)
    throw ConfigError("calibrate: only attack kinds are calibratable");
  if (multipliers.empty())
    multipliers = {0.5, 0.625, 0.75, 0.875, 1.0, 1.25};
  ExperimentConfig probe = base;
  probe.tau = 0.0;
  Resolved r0 = resolve(probe);
  double base_tau = r0.tau;
  CalibrationResult result;
  std::string csv = "multiplier,tau,trials,rate,median_reconstruct_round\n";
  for (double mult : multipliers) {
    ExperimentConfig cfg = base;
    cfg.tau = mult * base_tau;
    TrialSummary s = run_experiment(cfg);
    CalibrationPoint p;
    p.multiplier = mult;
    p.tau = cfg.tau;
    p.rate = s.rate;
    p.median_reconstruct = median_positive(s.aux_a);
    csv += fmt(p.multiplier) + "," + fmt(p.tau) + "," + std::to_string(s.trials) +
           "," + fmt(p.rate) + "," + fmt(p.median_reconstruct) + "\n";
    result.points.push_back(p);
  }
  const CalibrationPoint* best = &result.points.front();
  for (const CalibrationPoint& p : result.points)
    if (p.rate > best->rate || (p.rate == best->rate && p.tau > best->tau))
      best = &p;
  result.recommended_tau = best->tau;
  result.csv = std::move(csv);
  return result;
}

}  // namespace arena
