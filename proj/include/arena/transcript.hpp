#ifndef ARENA_TRANSCRIPT_HPP
#define ARENA_TRANSCRIPT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arena/domain.hpp"
#include "arena/query.hpp"

namespace arena {

// Accuracy bar of the game: a mechanism survives a round iff its answer
// is within 1/10 of the true answer (ties favor the mechanism).
inline constexpr double kAccuracyBar = 0.1;

struct RoundRecord {
  std::uint64_t query_digest = 0;
  QueryKind kind = QueryKind::kTable;
  double answer = 0.0;       // as delivered to the analyst (post clip)
  double true_answer = 0.0;  // exact expectation under D
  double error = 0.0;        // |answer - true_answer|
  bool clipped = false;      // answer was forced into [-1,1]
};

// Full record of one game: public parameters plus one line per round.
struct Transcript {
  std::size_t n = 0;
  std::size_t rounds_planned = 0;
  DomainSpec domain;
  std::vector<RoundRecord> rounds;

  // Line-oriented text form: header (n, rounds, domain echo), then one
  // tab-separated line per round: index, digest hex, answer, true answer,
  // error.  Byte-stable for identical runs.
  std::string serialize() const;
};

struct GameResult {
  int outcome = 0;  // 1 iff some round's error exceeded the accuracy bar
  std::optional<std::size_t> first_failure_round;  // 1-based
  double max_error = 0.0;
  std::size_t clipped_rounds = 0;
  Transcript transcript;
  // Retained for protocol emulations built on top of the game loop.
  std::optional<Query> last_query;
  // Full query objects, only when requested via RunOptions.
  std::vector<Query> queries;
};

// Outcome of a finished transcript under the strict > bar rule.
int outcome_of(const Transcript& t);

}  // namespace arena

#endif  // ARENA_TRANSCRIPT_HPP
