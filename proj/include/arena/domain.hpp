#ifndef ARENA_DOMAIN_HPP
#define ARENA_DOMAIN_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "arena/bits.hpp"

namespace arena {

class RngStream;

// Error thrown for ill-formed configurations (bad parameters, mismatched
// domains, malformed queries).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Error thrown when a game participant breaks the rules of the protocol
// it is playing (out-of-range query values, forbidden oracle calls, ...).
struct ProtocolViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The data universe of a game.  Either the index universe {1..m} or the
// triplet universe {1..m} x {0,1}^k x {0,1}^k of (identity, master public
// key, identity key) records.
struct DomainSpec {
  enum class Kind { kIndex, kTriplet };

  Kind kind = Kind::kIndex;
  std::uint32_t m = 0;        // identity universe size
  std::size_t key_bits = 0;   // k; 0 for index domains

  static DomainSpec index(std::uint32_t m) { return {Kind::kIndex, m, 0}; }
  static DomainSpec triplet(std::uint32_t m, std::size_t key_bits) {
    return {Kind::kTriplet, m, key_bits};
  }

  bool operator==(const DomainSpec& o) const {
    return kind == o.kind && m == o.m && key_bits == o.key_bits;
  }
  bool operator!=(const DomainSpec& o) const { return !(*this == o); }

  // Bits needed to write one element down.
  std::size_t element_bits() const;
};

// One element of a domain.  Index-domain elements carry only `index`;
// triplet-domain elements also carry (mpk, sk).  `index` is 1-based to
// match the usual [m] convention; `mpk` is shared across a table so it is
// held by pointer.
struct Element {
  std::uint32_t index = 0;
  std::shared_ptr<const BitString> mpk;
  std::shared_ptr<const BitString> sk;
};

using SampleSet = std::vector<Element>;

// A distribution with explicit finite support.  Supports the uniform
// shortcut (no weight vector stored) and general non-negative weights
// summing to 1.
class FiniteDistribution {
 public:
  // Uniform over the given support.
  static FiniteDistribution uniform(DomainSpec domain, std::vector<Element> support);
  // Weighted; weights must be non-negative and sum to 1 within 1e-9.
  static FiniteDistribution weighted(DomainSpec domain, std::vector<Element> support,
                                     std::vector<double> weights);

  const DomainSpec& domain() const { return domain_; }
  const std::vector<Element>& support() const { return support_; }
  bool is_uniform() const { return weights_.empty(); }
  double weight(std::size_t i) const {
    return weights_.empty() ? 1.0 / static_cast<double>(support_.size()) : weights_[i];
  }

  const Element& sample(RngStream& rng) const;
  SampleSet sample_many(std::size_t count, RngStream& rng) const;

 private:
  DomainSpec domain_;
  std::vector<Element> support_;
  std::vector<double> weights_;  // empty => uniform
  std::vector<double> cdf_;      // prefix sums for weighted sampling
};

// Uniform distribution over the index universe {1..m}.
FiniteDistribution uniform_index_distribution(std::uint32_t m);

}  // namespace arena

#endif  // ARENA_DOMAIN_HPP
