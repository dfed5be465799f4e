#include "arena/transcript.hpp"

#include <cinttypes>
#include <cstdio>

namespace arena {

std::string Transcript::serialize() const {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "n %zu\nrounds %zu\ndomain %s %u %zu\n", n,
                rounds_planned,
                domain.kind == DomainSpec::Kind::kIndex ? "index" : "triplet",
                domain.m, domain.key_bits);
  out += buf;
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const RoundRecord& r = rounds[i];
    std::snprintf(buf, sizeof(buf), "%zu\t%016" PRIx64 "\t%.17g\t%.17g\t%.17g\n",
                  i + 1, r.query_digest, r.answer, r.true_answer, r.error);
    out += buf;
  }
  return out;
}

int outcome_of(const Transcript& t) {
  for (const RoundRecord& r : t.rounds) {
    if (r.error > kAccuracyBar) return 1;
  }
  return 0;
}

}  // namespace arena
