#include "arena/domain.hpp"

#include <cmath>

#include "arena/rng.hpp"

namespace arena {

std::size_t DomainSpec::element_bits() const {
  std::size_t index_bits = 1;
  while ((1ull << index_bits) < m) ++index_bits;
  return kind == Kind::kIndex ? index_bits : index_bits + 2 * key_bits;
}

FiniteDistribution FiniteDistribution::uniform(DomainSpec domain,
                                               std::vector<Element> support) {
  if (support.empty()) throw ConfigError("FiniteDistribution: empty support");
  FiniteDistribution d;
  d.domain_ = domain;
  d.support_ = std::move(support);
  return d;
}

FiniteDistribution FiniteDistribution::weighted(DomainSpec domain,
                                                std::vector<Element> support,
                                                std::vector<double> weights) {
  if (support.empty()) throw ConfigError("FiniteDistribution: empty support");
  if (support.size() != weights.size())
    throw ConfigError("FiniteDistribution: support/weight length mismatch");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ConfigError("FiniteDistribution: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConfigError("FiniteDistribution: weights must sum to 1");
  FiniteDistribution d;
  d.domain_ = domain;
  d.support_ = std::move(support);
  d.cdf_.reserve(weights.size());
  double acc = 0.0;
  for (double w : weights) {
    acc += w;
    d.cdf_.push_back(acc);
  }
  d.cdf_.back() = 1.0;
  d.weights_ = std::move(weights);
  return d;
}

const Element& FiniteDistribution::sample(RngStream& rng) const {
  if (weights_.empty()) {
    return support_[rng.below(support_.size())];
  }
  const double u = rng.uniform01();
  // First index with cdf > u; linear scan is fine at simulation scales.
  std::size_t lo = 0, hi = cdf_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (cdf_[mid] > u)
      hi = mid;
    else
      lo = mid + 1;
  }
  return support_[lo];
}

SampleSet FiniteDistribution::sample_many(std::size_t count, RngStream& rng) const {
  SampleSet out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample(rng));
  return out;
}

FiniteDistribution uniform_index_distribution(std::uint32_t m) {
  if (m == 0) throw ConfigError("uniform_index_distribution: m == 0");
  std::vector<Element> support;
  support.reserve(m);
  for (std::uint32_t j = 1; j <= m; ++j) support.push_back(Element{j, nullptr, nullptr});
  return FiniteDistribution::uniform(DomainSpec::index(m), std::move(support));
}

}  // namespace arena
