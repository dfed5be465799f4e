#include "arena/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arena {

double hoeffding_bound(std::size_t n, double alpha) {
  if (alpha < 0.0 || alpha > 2.0) throw std::invalid_argument("hoeffding_bound: alpha outside [0,2]");
  return 2.0 * std::exp(-alpha * alpha * static_cast<double>(n) / 2.0);
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: zero trials");
  if (successes > trials) throw std::invalid_argument("wilson_interval: successes > trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {center - half, center + half};
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean_of: empty");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("sample_stddev: need >= 2 values");
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double median_of(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median_of: empty");
  std::sort(xs.begin(), xs.end());
  const std::size_t k = xs.size() / 2;
  if (xs.size() % 2 == 1) return xs[k];
  return 0.5 * (xs[k - 1] + xs[k]);
}

}  // namespace arena
