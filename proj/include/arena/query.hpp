#ifndef ARENA_QUERY_HPP
#define ARENA_QUERY_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "arena/domain.hpp"
#include "arena/ibe.hpp"

namespace arena {

// Error produced when a query cannot be evaluated on an element
// (malformed bundle, missing ciphertext, ...).
struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class QueryKind { kTable, kBitProjection, kCiphertextBundle };

const char* query_kind_name(QueryKind kind);

// A statistical query X -> [-1,1] in one of three forms:
//
//  * table           - explicit value per index j in [m]
//  * bit projection  - (j, mpk, sk) -> bit i of mpk
//  * bundle          - (j, mpk, sk) -> Decrypt(sk, ct_j), a value in
//                      {-1,0,1}; an entry whose decryption fails under the
//                      element's key evaluates to 0 (failures can be
//                      tallied via the optional counter)
//
// Queries are immutable once built.
class Query {
 public:
  static Query table(DomainSpec domain, std::vector<double> values,
                     bool validate = true);
  static Query bit_projection(DomainSpec domain, std::size_t bit_index);
  static Query ciphertext_bundle(DomainSpec domain,
                                 std::shared_ptr<const IbeScheme> scheme,
                                 std::vector<Ciphertext> cts);

  QueryKind kind() const { return kind_; }
  const DomainSpec& domain() const { return domain_; }
  const std::vector<double>& table_values() const { return values_; }
  std::size_t bit_index() const { return bit_index_; }
  const std::vector<Ciphertext>& bundle() const { return cts_; }

  // Value of the query on one element; always in [-1,1].
  double evaluate(const Element& x, std::size_t* decrypt_failures = nullptr) const;

  // True whenever some table value lies outside [-1,1] (only possible for
  // tables built with validate = false).
  bool out_of_range() const;

  // Stable 64-bit content digest (used in transcripts).
  std::uint64_t digest() const;

 private:
  Query() = default;
  QueryKind kind_ = QueryKind::kTable;
  DomainSpec domain_;
  std::vector<double> values_;
  std::size_t bit_index_ = 0;
  std::shared_ptr<const IbeScheme> scheme_;
  std::vector<Ciphertext> cts_;
};

// Exact expectation of q under D: the weighted sum over the explicit
// support.  For uniform supports the values are accumulated first and
// divided once, so algebraically equal queries produce bit-identical
// results.
double true_answer(const Query& q, const FiniteDistribution& d);

}  // namespace arena

#endif  // ARENA_QUERY_HPP
