#include "arena/query.hpp"

#include <cmath>
#include <cstring>

#include "arena/rng.hpp"

namespace arena {

const char* query_kind_name(QueryKind kind) {
  switch (kind) {
    case QueryKind::kTable:
      return "table";
    case QueryKind::kBitProjection:
      return "bitproj";
    case QueryKind::kCiphertextBundle:
      return "bundle";
  }
  return "?";
}

Query Query::table(DomainSpec domain, std::vector<double> values, bool validate) {
  if (domain.kind != DomainSpec::Kind::kIndex)
    throw ConfigError("Query::table: table queries live on index domains");
  if (values.size() != domain.m)
    throw ConfigError("Query::table: need one value per index");
  if (validate) {
    for (double v : values) {
      if (!(v >= -1.0 && v <= 1.0))
        throw ConfigError("Query::table: value outside [-1,1]");
    }
  }
  Query q;
  q.kind_ = QueryKind::kTable;
  q.domain_ = domain;
  q.values_ = std::move(values);
  return q;
}

Query Query::bit_projection(DomainSpec domain, std::size_t bit_index) {
  if (domain.kind != DomainSpec::Kind::kTriplet)
    throw ConfigError("Query::bit_projection: needs a triplet domain");
  if (bit_index >= domain.key_bits)
    throw ConfigError("Query::bit_projection: bit index out of range");
  Query q;
  q.kind_ = QueryKind::kBitProjection;
  q.domain_ = domain;
  q.bit_index_ = bit_index;
  return q;
}

Query Query::ciphertext_bundle(DomainSpec domain,
                               std::shared_ptr<const IbeScheme> scheme,
                               std::vector<Ciphertext> cts) {
  if (domain.kind != DomainSpec::Kind::kTriplet)
    throw ConfigError("Query::ciphertext_bundle: needs a triplet domain");
  if (!scheme) throw ConfigError("Query::ciphertext_bundle: null scheme");
  if (cts.size() != domain.m)
    throw ConfigError("Query::ciphertext_bundle: need one ciphertext per identity");
  for (std::size_t j = 0; j < cts.size(); ++j) {
    if (cts[j].identity != j + 1)
      throw ConfigError("Query::ciphertext_bundle: ciphertext identity mismatch");
  }
  Query q;
  q.kind_ = QueryKind::kCiphertextBundle;
  q.domain_ = domain;
  q.scheme_ = std::move(scheme);
  q.cts_ = std::move(cts);
  return q;
}

double Query::evaluate(const Element& x, std::size_t* decrypt_failures) const {
  if (x.index < 1 || x.index > domain_.m)
    throw EvaluationError("Query::evaluate: element index outside domain");
  switch (kind_) {
    case QueryKind::kTable:
      return values_[x.index - 1];
    case QueryKind::kBitProjection: {
      if (!x.mpk) throw EvaluationError("Query::evaluate: element lacks mpk");
      return static_cast<double>(x.mpk->bit(bit_index_));
    }
    case QueryKind::kCiphertextBundle: {
      if (!x.sk) throw EvaluationError("Query::evaluate: element lacks sk");
      // Only ct_{x.index} is inspected.
      const DecryptedValue v = scheme_->decrypt_value(*x.sk, cts_[x.index - 1]);
      if (!v.ok) {
        if (decrypt_failures) ++*decrypt_failures;
        return 0.0;
      }
      return static_cast<double>(v.value);
    }
  }
  throw EvaluationError("Query::evaluate: unreachable");
}

bool Query::out_of_range() const {
  for (double v : values_) {
    if (!(v >= -1.0 && v <= 1.0)) return true;
  }
  return false;
}

std::uint64_t Query::digest() const {
  std::uint64_t h = mix64(0x71756572ull ^ static_cast<std::uint64_t>(kind_));
  h = mix64(h ^ static_cast<std::uint64_t>(domain_.kind));
  h = mix64(h ^ domain_.m);
  h = mix64(h ^ domain_.key_bits);
  switch (kind_) {
    case QueryKind::kTable:
      for (double v : values_) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        h = mix64(h ^ bits);
      }
      break;
    case QueryKind::kBitProjection:
      h = mix64(h ^ bit_index_);
      break;
    case QueryKind::kCiphertextBundle:
      for (const Ciphertext& ct : cts_) {
        h = mix64(h ^ ct.identity);
        h = mix64(h ^ ct.nbytes);
        for (std::uint64_t w : ct.body) h = mix64(h ^ w);
      }
      break;
  }
  return h;
}

double true_answer(const Query& q, const FiniteDistribution& d) {
  if (q.domain() != d.domain())
    throw ConfigError("true_answer: query and distribution domains differ");
  const auto& support = d.support();
  if (d.is_uniform()) {
    double sum = 0.0;
    for (const Element& x : support) sum += q.evaluate(x);
    return sum / static_cast<double>(support.size());
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    acc += d.weight(i) * q.evaluate(support[i]);
  }
  return acc;
}

}  // namespace arena
